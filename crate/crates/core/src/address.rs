//! Angled internal addresses, long internal addresses, sides of rays and
//! renormalization read off an internal address.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::angle::{AngleInt, BinaryAngle};
use crate::error::{Error, Result};
use crate::kneading::{
    address_word, internal_address_of, kneading_of_address, kneading_of_angle, rho_orbit,
    upper_lower, InternalAddress, Kneading, Rho, Symbol,
};

/// An internal angle `p/q` with `0 < p < q` coprime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InternalAngle {
    pub numerator: u64,
    pub denominator: u64,
}

impl InternalAngle {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if numerator == 0 || numerator >= denominator || numerator.gcd(&denominator) != 1 {
            return Err(Error::InvalidArgument(format!(
                "{numerator}/{denominator} is not a reduced internal angle"
            )));
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }
}

impl fmt::Display for InternalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl FromStr for InternalAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::FractionSyntax(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        Self::new(p, q).map_err(|_| bad())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngledEntry {
    pub period: usize,
    #[serde(flatten)]
    pub angle: Option<InternalAngle>,
}

/// `S₀[p₀/q₀]-S₁[p₁/q₁]-…`. Every entry but the last carries an angle.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngledInternalAddress {
    items: Vec<AngledEntry>,
    truncated: bool,
}

impl AngledInternalAddress {
    pub fn new(items: Vec<AngledEntry>, truncated: bool) -> Result<Self> {
        let periods: Vec<usize> = items.iter().map(|e| e.period).collect();
        InternalAddress::new(periods, truncated)?;
        let last = items.len() - 1;
        for (i, e) in items.iter().enumerate() {
            if (i < last) != e.angle.is_some() {
                return Err(Error::MalformedAddress(
                    "every entry except the last needs an internal angle".into(),
                ));
            }
        }
        Ok(Self { items, truncated })
    }

    pub fn items(&self) -> &[AngledEntry] {
        &self.items
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn internal_address(&self) -> InternalAddress {
        InternalAddress::new(self.items.iter().map(|e| e.period).collect(), self.truncated)
            .expect("validated on construction")
    }

    pub fn denominators(&self) -> Vec<u64> {
        self.items
            .iter()
            .filter_map(|e| e.angle.map(|a| a.denominator))
            .collect()
    }

    /// The finite address of the first `len` entries; the last of them loses
    /// its angle.
    pub fn prefix(&self, len: usize) -> Self {
        let mut items = self.items[..len].to_vec();
        if let Some(last) = items.last_mut() {
            last.angle = None;
        }
        Self {
            items,
            truncated: false,
        }
    }

    /// The same address with numerators replaced.
    pub fn with_numerators(&self, numerators: &[u64]) -> Result<Self> {
        let mut items = self.items.clone();
        let mut given = numerators.iter();
        for e in items.iter_mut() {
            if let Some(a) = e.angle {
                let p = *given
                    .next()
                    .ok_or_else(|| Error::InvalidArgument("too few numerators".into()))?;
                e.angle = Some(InternalAngle::new(p, a.denominator)?);
            }
        }
        Self::new(items, self.truncated)
    }
}

impl fmt::Display for AngledInternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .items
            .iter()
            .map(|e| match e.angle {
                Some(a) => format!("{}[{}]", e.period, a),
                None => e.period.to_string(),
            })
            .collect();
        write!(f, "{}", parts.join("-"))?;
        if self.truncated {
            write!(f, "-…")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AngledInternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for AngledInternalAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::AddressSyntax(s.to_string());
        let normalized = s.trim().replace("->", "-").replace('→', "-");
        let mut items = Vec::new();
        let mut truncated = false;
        for token in normalized.split('-').map(str::trim) {
            if truncated {
                return Err(bad());
            }
            if token == "…" || token == "..." {
                truncated = true;
                continue;
            }
            let (period, angle) = match token.split_once('[') {
                Some((p, rest)) => {
                    let inner = rest.strip_suffix(']').ok_or_else(bad)?;
                    (p, Some(inner.parse::<InternalAngle>().map_err(|_| bad())?))
                }
                None => (token, None),
            };
            let period = period.trim().parse::<usize>().map_err(|_| bad())?;
            items.push(AngledEntry { period, angle });
        }
        if items.is_empty() {
            return Err(bad());
        }
        Self::new(items, truncated).map_err(|_| bad())
    }
}

/// The denominators `q_k` for every pair of consecutive entries.
pub fn denominators(addr: &InternalAddress) -> Result<Vec<u64>> {
    let entries = addr.entries();
    if entries.len() < 2 {
        return Err(Error::MalformedAddress(format!(
            "{addr} has no consecutive entries"
        )));
    }
    (0..entries.len() - 1)
        .map(|k| {
            let nu = kneading_of_address(&addr.prefix(k + 2))?;
            denominator_step(&nu, entries[k], entries[k + 1])
        })
        .collect()
}

/// `q` for the step `s → next`, reading `ν` only up to position `s`.
pub(crate) fn denominator_step(nu: &Kneading, s: usize, next: usize) -> Result<u64> {
    let r = (next - 1) % s + 1;
    let orbit = rho_orbit(nu, r, s)?;
    let base = ((next - r) / s) as u64;
    if orbit.contains(&Rho::Finite(s)) {
        Ok(base + 1)
    } else {
        Ok(base + 2)
    }
}

/// The number of `θ, 2^S θ, …, 2^{(q-2)S} θ` lying in `(0, θ]`.
pub fn numerator<T: AngleInt>(theta: &BinaryAngle<T>, s: usize, q: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("denominator {q} is below 2")));
    }
    let mut x = theta.clone();
    let mut p = 0;
    for _ in 0..q - 1 {
        if !x.is_zero() && x <= *theta {
            p += 1;
        }
        x = x.double_n(s);
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InconsistentNumerator { p, q });
    }
    Ok(p)
}

/// The angled internal address of the parameter ray at `theta`.
pub fn angled_address_of_angle<T: AngleInt>(
    theta: &BinaryAngle<T>,
    cutoff: usize,
) -> Result<AngledInternalAddress> {
    let nu = kneading_of_angle(theta);
    let addr = internal_address_of(&nu, cutoff)?;
    let entries = addr.entries();
    let mut items = Vec::with_capacity(entries.len());
    if entries.len() > 1 {
        for (k, q) in denominators(&addr)?.into_iter().enumerate() {
            let p = numerator(theta, entries[k], q)?;
            items.push(AngledEntry {
                period: entries[k],
                angle: Some(InternalAngle::new(p, q)?),
            });
        }
    }
    items.push(AngledEntry {
        period: addr.last(),
        angle: None,
    });
    AngledInternalAddress::new(items, addr.is_truncated())
}

/// A periodic ray pair on the way to a component, with the kneading sequence
/// seen from inside its wake.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongEntry {
    pub period: usize,
    pub kneading: Kneading,
}

/// All periodic ray pairs of period at most `cutoff` separating the
/// component with internal address `addr` from the origin, in order.
pub fn long_address(addr: &InternalAddress, cutoff: usize) -> Result<Vec<LongEntry>> {
    if addr.is_truncated() {
        return Err(Error::MalformedAddress(format!("{addr} is not finite")));
    }
    if cutoff < addr.last() {
        return Err(Error::InvalidArgument(format!(
            "cutoff {cutoff} is below the last entry {}",
            addr.last()
        )));
    }
    let known: Vec<LongEntry> = (1..=addr.len())
        .map(|len| {
            Ok(LongEntry {
                period: addr.entries()[len - 1],
                kneading: kneading_of_address(&addr.prefix(len))?,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = vec![known[0].clone()];
    for pair in known.windows(2) {
        fill_gap(&pair[0], &pair[1], cutoff, &mut out)?;
        out.push(pair[1].clone());
    }
    Ok(out)
}

/// The resolution of a pair's kneading seen from outside its wake.
fn outer_resolution(inner: &Kneading, period: usize) -> Result<Kneading> {
    let mut word = inner.first(period);
    word[period - 1] = word[period - 1].flipped();
    Kneading::periodic(word)
}

fn fill_gap(lo: &LongEntry, hi: &LongEntry, cutoff: usize, out: &mut Vec<LongEntry>) -> Result<()> {
    let facing = outer_resolution(&hi.kneading, hi.period)?;
    let Some(m) = first_separating_period(&lo.kneading, &facing, cutoff) else {
        return Ok(());
    };
    let body: Vec<u8> = lo.kneading.first_bits(m - 1)?;
    let (inner, _) = upper_lower(&Kneading::star_periodic(&body))?;
    let mid = LongEntry {
        period: m,
        kneading: inner,
    };
    fill_gap(lo, &mid, cutoff, out)?;
    out.push(mid.clone());
    fill_gap(&mid, hi, cutoff, out)
}

/// The first position at which two ★-free sequences differ, if it is at most
/// `cutoff`.
pub fn first_separating_period(alpha: &Kneading, beta: &Kneading, cutoff: usize) -> Option<usize> {
    let bound = alpha.preperiod().max(beta.preperiod()) + alpha.period().lcm(&beta.period());
    (1..=bound.min(cutoff)).find(|&k| alpha.at(k) != beta.at(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "LOWER",
            Side::Upper => "UPPER",
        })
    }
}

/// Whether a periodic angle is the smaller or the larger angle of its ray
/// pair, from its `n`-th binary digit and the `n`-th entry of `A(ν)`.
pub fn side_of_ray<T: AngleInt>(theta: &BinaryAngle<T>) -> Result<Side> {
    if !theta.is_periodic() {
        return Err(Error::NotPeriodic(theta.to_string()));
    }
    if theta.is_zero() {
        return Ok(Side::Lower);
    }
    let n = theta.orbit_type().period;
    let (a, _) = upper_lower(&kneading_of_angle(theta))?;
    let digit = theta.binary_digits(n)[n - 1];
    let entry = a.at(n).bit().expect("resolutions are ★-free");
    Ok(if digit != entry { Side::Lower } else { Side::Upper })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenormalizationReport {
    pub simple: Vec<usize>,
    pub crossed: Vec<(usize, usize)>,
}

/// Periods of simple and crossed renormalization readable from `addr`.
pub fn renormalization(addr: &InternalAddress) -> RenormalizationReport {
    let entries = addr.entries();
    let mut report = RenormalizationReport::default();
    for (k, &m) in entries.iter().enumerate() {
        let later = &entries[k + 1..];
        if later.iter().all(|s| s % m == 0) {
            report.simple.push(m);
        }
        if later.is_empty() {
            continue;
        }
        let g = later.iter().fold(0usize, |g, &s| g.gcd(&s));
        for n in (2 * m..=g).step_by(m) {
            if g % n == 0 && !addr.contains(n) && later.iter().all(|&s| s != n) {
                report.crossed.push((m, n));
            }
        }
    }
    report
}

/// Whether the kneading sequence of `addr` has a 0 at every entry after the
/// first.
pub fn is_purely_narrow(addr: &InternalAddress) -> Result<bool> {
    if addr.is_truncated() {
        return Err(Error::MalformedAddress(format!("{addr} is not finite")));
    }
    let word = address_word(addr.entries());
    Ok(addr.entries()[1..]
        .iter()
        .all(|&s| word[s - 1] == Symbol::Zero))
}
