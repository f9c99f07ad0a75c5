//! Kneading sequences over `{0, 1, ★}` and their internal addresses.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::angle::{AngleInt, BinaryAngle};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Star,
}

impl Symbol {
    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Symbol::Zero
        } else {
            Symbol::One
        }
    }

    pub fn bit(self) -> Option<u8> {
        match self {
            Symbol::Zero => Some(0),
            Symbol::One => Some(1),
            Symbol::Star => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Symbol::Zero => Symbol::One,
            Symbol::One => Symbol::Zero,
            Symbol::Star => Symbol::Star,
        }
    }

    fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Star => '*',
        }
    }
}

/// An eventually periodic sequence `prefix · tail · tail · …`.
///
/// Sequences over `{0, 1}` are kept in normal form: the tail has minimal
/// period and the prefix is as short as possible. A ★-periodic sequence has
/// an empty prefix and a single ★ closing its tail.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Kneading {
    prefix: Vec<Symbol>,
    tail: Vec<Symbol>,
}

impl Kneading {
    pub fn new(prefix: Vec<Symbol>, tail: Vec<Symbol>) -> Result<Self> {
        let text = || format!("pre({})per({})", word(&prefix), word(&tail));
        if tail.is_empty() {
            return Err(Error::KneadingSyntax(text()));
        }
        let stars = prefix.iter().chain(&tail).filter(|s| **s == Symbol::Star).count();
        if stars > 0 {
            if stars > 1 || !prefix.is_empty() || tail.last() != Some(&Symbol::Star) {
                return Err(Error::KneadingSyntax(text()));
            }
            return Ok(Self { prefix, tail });
        }
        Ok(normalize(prefix, tail))
    }

    pub fn periodic(tail: Vec<Symbol>) -> Result<Self> {
        Self::new(Vec::new(), tail)
    }

    /// The periodic 0/1 sequence repeating `bits`.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::periodic(bits.iter().map(|&b| Symbol::from_bit(b)).collect())
    }

    /// The ★-periodic sequence `body ★ body ★ …` of period `body.len() + 1`.
    pub fn star_periodic(body: &[u8]) -> Self {
        let mut tail: Vec<Symbol> = body.iter().map(|&b| Symbol::from_bit(b)).collect();
        tail.push(Symbol::Star);
        Self {
            prefix: Vec::new(),
            tail,
        }
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn tail(&self) -> &[Symbol] {
        &self.tail
    }

    pub fn preperiod(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.tail.len()
    }

    pub fn is_star_periodic(&self) -> bool {
        self.tail.last() == Some(&Symbol::Star)
    }

    pub fn is_periodic(&self) -> bool {
        self.prefix.is_empty()
    }

    /// The entry `ν_k`, counting from 1.
    pub fn at(&self, k: usize) -> Symbol {
        assert!(k >= 1, "kneading entries are indexed from 1");
        let i = k - 1;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.tail[(i - self.prefix.len()) % self.tail.len()]
        }
    }

    /// The first `count` entries.
    pub fn first(&self, count: usize) -> Vec<Symbol> {
        (1..=count).map(|k| self.at(k)).collect()
    }

    /// The first `count` entries as bits; fails on a ★.
    pub fn first_bits(&self, count: usize) -> Result<Vec<u8>> {
        (1..=count)
            .map(|k| self.at(k).bit().ok_or(Error::StarEncountered(k)))
            .collect()
    }

    /// Replaces the ★ of a ★-periodic sequence by `bit`.
    pub fn resolve(&self, bit: u8) -> Result<Self> {
        if !self.is_star_periodic() {
            return Err(Error::NotStarPeriodic(self.to_string()));
        }
        let mut tail = self.tail.clone();
        *tail.last_mut().expect("nonempty tail") = Symbol::from_bit(bit);
        Self::periodic(tail)
    }

    /// The shifted sequence `ν_{r+1} ν_{r+2} …`.
    pub fn shift(&self, r: usize) -> Self {
        if r <= self.prefix.len() {
            return Self::new(self.prefix[r..].to_vec(), self.tail.clone())
                .unwrap_or_else(|_| self.clone());
        }
        let offset = (r - self.prefix.len()) % self.tail.len();
        let mut tail = self.tail[offset..].to_vec();
        tail.extend_from_slice(&self.tail[..offset]);
        Self::new(Vec::new(), tail.clone()).unwrap_or(Self {
            prefix: Vec::new(),
            tail,
        })
    }

    /// Compares entries lexicographically with 0 < 1 up to position `len`.
    pub fn cmp_prefix(&self, other: &Self, len: usize) -> std::cmp::Ordering {
        self.first(len).cmp(&other.first(len))
    }

    fn star_free(&self) -> bool {
        !self.is_star_periodic()
    }
}

fn word(symbols: &[Symbol]) -> String {
    symbols.iter().map(|s| s.as_char()).collect()
}

fn minimal_period(tail: &[Symbol]) -> usize {
    let n = tail.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (d..n).all(|i| tail[i] == tail[i - d]))
        .unwrap_or(n)
}

fn normalize(mut prefix: Vec<Symbol>, mut tail: Vec<Symbol>) -> Kneading {
    let d = minimal_period(&tail);
    tail.truncate(d);
    while let (Some(&p), Some(&t)) = (prefix.last(), tail.last()) {
        if p != t {
            break;
        }
        prefix.pop();
        tail.rotate_right(1);
    }
    Kneading { prefix, tail }
}

impl fmt::Display for Kneading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "per({})", word(&self.tail))
        } else {
            write!(f, "pre({})per({})", word(&self.prefix), word(&self.tail))
        }
    }
}

impl fmt::Debug for Kneading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Kneading {
    type Err = Error;

    /// Accepts `per(w)`, `pre(u)per(w)` and a bare word `w` meaning `per(w)`.
    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let bad = || Error::KneadingSyntax(s.to_string());
        let symbols = |w: &str| -> Result<Vec<Symbol>> {
            w.chars()
                .map(|c| match c {
                    '0' => Ok(Symbol::Zero),
                    '1' => Ok(Symbol::One),
                    '*' | '★' => Ok(Symbol::Star),
                    _ => Err(bad()),
                })
                .collect()
        };
        let inner = |w: &str, tag: &str| -> Option<String> {
            w.strip_prefix(tag)
                .and_then(|r| r.strip_suffix(')'))
                .map(str::to_string)
        };
        let (prefix, tail) = if let Some(rest) = text.strip_prefix("pre(") {
            let (pre, per) = rest.split_once(')').ok_or_else(bad)?;
            let per = inner(per, "per(").ok_or_else(bad)?;
            (symbols(pre)?, symbols(&per)?)
        } else if let Some(per) = inner(text, "per(") {
            (Vec::new(), symbols(&per)?)
        } else {
            (Vec::new(), symbols(text)?)
        };
        Self::new(prefix, tail).map_err(|_| bad())
    }
}

impl Serialize for Kneading {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Kneading {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A strictly increasing list of periods starting at 1. A truncated address
/// continues beyond its last listed entry.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InternalAddress {
    entries: Vec<usize>,
    truncated: bool,
}

impl InternalAddress {
    pub fn new(entries: Vec<usize>, truncated: bool) -> Result<Self> {
        if entries.first() != Some(&1) {
            return Err(Error::MalformedAddress("must start with 1".into()));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedAddress("entries must strictly increase".into()));
        }
        Ok(Self { entries, truncated })
    }

    pub fn finite(entries: Vec<usize>) -> Result<Self> {
        Self::new(entries, false)
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn last(&self) -> usize {
        *self.entries.last().expect("an address has at least one entry")
    }

    pub fn contains(&self, period: usize) -> bool {
        self.entries.binary_search(&period).is_ok()
    }

    /// The finite address made of the first `len` entries.
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            entries: self.entries[..len].to_vec(),
            truncated: false,
        }
    }
}

impl fmt::Display for InternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join("-"))?;
        if self.truncated {
            write!(f, "-…")?;
        }
        Ok(())
    }
}

impl fmt::Debug for InternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for InternalAddress {
    type Err = Error;

    /// Accepts entries separated by `-`, `->` or `→`; a trailing `…` or `...`
    /// marks truncation.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::AddressSyntax(s.to_string());
        let normalized = s.trim().replace("->", "-").replace('→', "-");
        let mut truncated = false;
        let mut entries = Vec::new();
        for token in normalized.split('-').map(str::trim) {
            if truncated {
                return Err(bad());
            }
            if token == "…" || token == "..." {
                truncated = true;
                continue;
            }
            entries.push(token.parse::<usize>().map_err(|_| bad())?);
        }
        Self::new(entries, truncated).map_err(|_| bad())
    }
}

/// `ρ(r)` as a position or the value beyond every position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rho {
    Finite(usize),
    Infinity,
}

impl Rho {
    pub fn finite(self) -> Option<usize> {
        match self {
            Rho::Finite(k) => Some(k),
            Rho::Infinity => None,
        }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Finite(k) => write!(f, "{k}"),
            Rho::Infinity => write!(f, "∞"),
        }
    }
}

/// The itinerary of `θ` under doubling with respect to the cut at `θ/2` and
/// `(θ+1)/2`. Angle 0 gives the sequence `per(*)`.
pub fn kneading_of_angle<T: AngleInt>(theta: &BinaryAngle<T>) -> Kneading {
    if theta.is_zero() {
        return Kneading::star_periodic(&[]);
    }
    let lo = theta.half();
    let hi = theta.half_plus();
    let orbit = theta.orbit_type();
    let mut x = theta.clone();
    let mut symbols = Vec::with_capacity(orbit.preperiod + orbit.period);
    for _ in 0..orbit.preperiod + orbit.period {
        let s = if x == lo || x == hi {
            Symbol::Star
        } else if lo < x && x < hi {
            Symbol::One
        } else {
            Symbol::Zero
        };
        symbols.push(s);
        x = x.double();
    }
    let tail = symbols.split_off(orbit.preperiod);
    Kneading::new(symbols, tail).expect("a ★ can only close the period of a periodic angle")
}

/// The two resolutions `(A(ν), Ā(ν))` of a ★-periodic sequence: `A` is the
/// one whose internal address contains the period.
pub fn upper_lower(nu: &Kneading) -> Result<(Kneading, Kneading)> {
    if !nu.is_star_periodic() {
        return Err(Error::NotStarPeriodic(nu.to_string()));
    }
    let n = nu.period();
    let zero = nu.resolve(0)?;
    let one = nu.resolve(1)?;
    if n == 1 {
        return Ok((one, zero));
    }
    if internal_address_of(&one, n)?.contains(n) {
        Ok((one, zero))
    } else {
        Ok((zero, one))
    }
}

/// `ρ(r) = min{k > r : ν_k ≠ ν_{k−r}}`.
pub fn rho(nu: &Kneading, r: usize) -> Result<Rho> {
    if r == 0 {
        return Err(Error::InvalidArgument("rho requires r ≥ 1".into()));
    }
    let bound = r + nu.preperiod() + nu.period();
    for k in r + 1..=bound {
        let a = nu.at(k);
        let b = nu.at(k - r);
        if b == Symbol::Star {
            return Err(Error::StarEncountered(k - r));
        }
        if a == Symbol::Star {
            return Err(Error::StarEncountered(k));
        }
        if a != b {
            return Ok(Rho::Finite(k));
        }
    }
    Ok(Rho::Infinity)
}

/// `r, ρ(r), ρ²(r), …` up to and including the first value `≥ stop`; an
/// infinite value closes the list.
pub fn rho_orbit(nu: &Kneading, r: usize, stop: usize) -> Result<Vec<Rho>> {
    let mut orbit = vec![Rho::Finite(r)];
    let mut current = r;
    while current < stop {
        match rho(nu, current)? {
            Rho::Finite(k) => {
                orbit.push(Rho::Finite(k));
                current = k;
            }
            Rho::Infinity => {
                orbit.push(Rho::Infinity);
                break;
            }
        }
    }
    Ok(orbit)
}

/// Internal address of a kneading sequence by the first-difference recursion.
/// Entries beyond `cutoff` are not computed and the result is marked
/// truncated.
pub fn internal_address_of(nu: &Kneading, cutoff: usize) -> Result<InternalAddress> {
    match nu.at(1) {
        Symbol::Star => return InternalAddress::finite(vec![1]),
        Symbol::Zero => return Err(Error::LeadingZero(nu.to_string())),
        Symbol::One => {}
    }
    let mut entries = vec![1usize];
    let mut reference: Vec<Symbol> = vec![Symbol::One];
    loop {
        let s = reference.len();
        let bound = if nu.is_star_periodic() {
            nu.period()
        } else {
            nu.preperiod().max(s) + nu.period().lcm(&s) + s
        };
        let scan_to = bound.min(cutoff);
        let hit = (s + 1..=scan_to).find(|&k| nu.at(k) != reference[(k - 1) % s]);
        match hit {
            Some(k) => {
                entries.push(k);
                if nu.at(k) == Symbol::Star {
                    return InternalAddress::finite(entries);
                }
                reference = nu.first(k);
            }
            None if bound <= cutoff => return InternalAddress::finite(entries),
            None => return InternalAddress::new(entries, true),
        }
    }
}

/// The periodic 0/1 sequence whose internal address is `addr`, by flipping
/// entry `S` of the running sequence at every entry `S`.
pub fn kneading_of_address(addr: &InternalAddress) -> Result<Kneading> {
    if addr.is_truncated() {
        return Err(Error::MalformedAddress(format!("{addr} is not finite")));
    }
    Kneading::periodic(address_word(addr.entries()))
}

/// The period word of the kneading sequence of a finite address, of length
/// equal to its last entry.
pub(crate) fn address_word(entries: &[usize]) -> Vec<Symbol> {
    let mut w = vec![Symbol::One];
    for &s in &entries[1..] {
        let mut next: Vec<Symbol> = (0..s).map(|i| w[i % w.len()]).collect();
        next[s - 1] = next[s - 1].flipped();
        w = next;
    }
    w
}

/// Whether no shift of `ν` exceeds `ν`, tested through `ν_{ρ(r)} = 0`.
pub fn is_max_shift(nu: &Kneading) -> Result<bool> {
    if !nu.star_free() {
        return Err(Error::NotPeriodicKneading(nu.to_string()));
    }
    for r in 1..=nu.preperiod() + nu.period() {
        if let Rho::Finite(k) = rho(nu, r)? {
            if nu.at(k) != Symbol::Zero {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::BinaryAngle;
    use num_bigint::BigUint;

    fn k(s: &str) -> Kneading {
        s.parse().unwrap()
    }

    fn angle(n: u64, d: u64) -> BinaryAngle<BigUint> {
        BinaryAngle::from_u64(n, d).unwrap()
    }

    fn addr(s: &str) -> InternalAddress {
        s.parse().unwrap()
    }

    /// Itinerary straight from the definition, on a float-free grid: compare
    /// `2^{k-1} θ` with the two cut points by cross-multiplication.
    fn itinerary_oracle(num: u64, den: u64, len: usize) -> String {
        let mut x = num;
        let lo2 = num; // θ/2 scaled by 2·den
        let hi2 = num + den;
        (0..len)
            .map(|_| {
                let x2 = 2 * x;
                let c = if x2 == lo2 || x2 == hi2 {
                    '*'
                } else if lo2 < x2 && x2 < hi2 {
                    '1'
                } else {
                    '0'
                };
                x = (2 * x) % den;
                c
            })
            .collect()
    }

    #[test]
    fn kneadings_of_small_angles() {
        assert_eq!(kneading_of_angle(&angle(1, 3)).to_string(), "per(1*)");
        assert_eq!(kneading_of_angle(&angle(3, 7)).to_string(), "per(10*)");
        assert_eq!(kneading_of_angle(&angle(4, 15)).to_string(), "per(110*)");
        assert_eq!(kneading_of_angle(&angle(1, 7)).to_string(), "per(11*)");
        assert_eq!(kneading_of_angle(&angle(1, 2)).to_string(), "pre(1)per(0)");
        assert_eq!(kneading_of_angle(&angle(1, 4)).to_string(), "pre(11)per(0)");
        assert_eq!(kneading_of_angle(&angle(1, 6)).to_string(), "pre(1)per(10)");
        assert_eq!(kneading_of_angle(&BinaryAngle::<BigUint>::zero()).to_string(), "per(*)");
    }

    #[test]
    fn kneading_matches_definition() {
        for den in 2u64..200 {
            for num in 1..den {
                if num_integer::gcd(num, den) != 1 {
                    continue;
                }
                let a = BinaryAngle::<u64>::from_u64(num, den).unwrap();
                let nu = kneading_of_angle(&a);
                let expected = itinerary_oracle(num, den, 3 * den as usize);
                let got: String = nu.first(expected.len()).iter().map(|s| s.as_char()).collect();
                assert_eq!(got, expected, "{num}/{den}");
            }
        }
    }

    #[test]
    fn resolutions() {
        let (a, b) = upper_lower(&k("per(1*)")).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("per(10)".into(), "per(1)".into()));
        let (a, b) = upper_lower(&k("per(11*)")).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("per(110)".into(), "per(1)".into()));
        let (a, b) = upper_lower(&k("per(10*)")).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("per(100)".into(), "per(101)".into()));
        let (a, _) = upper_lower(&k("per(110*)")).unwrap();
        assert_eq!(a.to_string(), "per(1100)");
        let (a, b) = upper_lower(&k("per(*)")).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("per(1)".into(), "per(0)".into()));
        assert!(upper_lower(&k("per(10)")).is_err());
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(&k("10"), 1).unwrap(), Rho::Finite(2));
        assert_eq!(rho(&k("1100"), 1).unwrap(), Rho::Finite(3));
        assert_eq!(rho(&k("10"), 2).unwrap(), Rho::Infinity);
        assert!(matches!(rho(&k("10*"), 2), Err(Error::StarEncountered(3))));
    }

    #[test]
    fn rho_orbits() {
        use Rho::*;
        assert_eq!(rho_orbit(&k("1100"), 1, 3).unwrap(), vec![Finite(1), Finite(3)]);
        assert_eq!(rho_orbit(&k("10"), 1, 6).unwrap(), vec![Finite(1), Finite(2), Infinity]);
        assert_eq!(rho_orbit(&k("1"), 1, 5).unwrap(), vec![Finite(1), Infinity]);
        assert_eq!(rho_orbit(&k("1100"), 4, 4).unwrap(), vec![Finite(4)]);
    }

    #[test]
    fn addresses_of_kneadings() {
        assert_eq!(internal_address_of(&k("1100"), 64).unwrap(), addr("1-3-4"));
        assert_eq!(internal_address_of(&k("10*"), 64).unwrap(), addr("1-2-3"));
        let t = internal_address_of(&k("101"), 8).unwrap();
        assert_eq!(t.to_string(), "1-2-4-5-7-8-…");
        assert!(t.is_truncated());
        assert_eq!(internal_address_of(&k("1"), 64).unwrap(), addr("1"));
        assert_eq!(internal_address_of(&k("per(*)"), 64).unwrap(), addr("1"));
        let half = internal_address_of(&k("pre(1)per(0)"), 6).unwrap();
        assert_eq!(half.to_string(), "1-2-3-4-5-6-…");
        assert!(matches!(internal_address_of(&k("01"), 8), Err(Error::LeadingZero(_))));
    }

    #[test]
    fn kneadings_of_addresses() {
        assert_eq!(kneading_of_address(&addr("1-3-4")).unwrap(), k("1100"));
        assert_eq!(kneading_of_address(&addr("1")).unwrap(), k("1"));
        assert_eq!(kneading_of_address(&addr("1-2-3")).unwrap(), k("100"));
        assert_eq!(kneading_of_address(&addr("1-2-4")).unwrap(), k("1011"));
        assert!(kneading_of_address(&addr("1-2-…")).is_err());
    }

    #[test]
    fn max_shifts() {
        assert!(is_max_shift(&k("110")).unwrap());
        assert!(!is_max_shift(&k("101")).unwrap());
        assert!(is_max_shift(&k("1")).unwrap());
        assert!(is_max_shift(&k("1100")).unwrap());
    }

    #[test]
    fn normal_forms() {
        assert_eq!(k("1010").to_string(), "per(10)");
        assert_eq!(k("pre(10)per(10)").to_string(), "per(10)");
        assert_eq!(k("pre(110)per(0)").to_string(), "pre(11)per(0)");
        assert_eq!(k("pre(1)per(01)").to_string(), "per(10)");
        assert_eq!(k("per(10★)"), k("per(10*)"));
        for bad in ["", "per()", "pre(1)per(1*)", "per(*1)", "per(1*1*)", "12", "per(10"] {
            assert!(bad.parse::<Kneading>().is_err(), "{bad:?}");
        }
        assert_eq!(k("1011").shift(2), k("1110"));
        assert_eq!(k("pre(11)per(0)").shift(1), k("pre(1)per(0)"));
    }

    #[test]
    fn address_parsing() {
        assert_eq!(addr("1->3->4"), addr("1-3-4"));
        assert_eq!(addr("1→3→4"), addr("1-3-4"));
        assert!(addr("1-2-...").is_truncated());
        for bad in ["", "2-3", "1-3-3", "1-x", "1-…-3", "1--2"] {
            assert!(bad.parse::<InternalAddress>().is_err(), "{bad:?}");
        }
        let json = serde_json::to_string(&addr("1-3-4")).unwrap();
        assert_eq!(json, r#"{"entries":[1,3,4],"truncated":false}"#);
    }

    fn all_words(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0u32..1 << n).map(move |m| (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect())
    }

    #[test]
    fn max_shift_equivalence_small() {
        for n in 1..=8 {
            for w in all_words(n) {
                let nu = Kneading::from_bits(&w).unwrap();
                let lex = (1..n).all(|r| {
                    let shifted: Vec<u8> = (0..n).map(|i| w[(i + r) % n]).collect();
                    shifted <= w
                });
                assert_eq!(is_max_shift(&nu).unwrap(), lex, "{w:?}");
            }
        }
    }

    #[test]
    fn address_round_trip_small() {
        for mask in 0u32..1 << 9 {
            let mut entries = vec![1];
            entries.extend((2..=10).filter(|e| mask >> (e - 2) & 1 == 1));
            let a = InternalAddress::finite(entries).unwrap();
            let nu = kneading_of_address(&a).unwrap();
            assert_eq!(internal_address_of(&nu, 64).unwrap(), a);
        }
    }

    #[test]
    fn limit_sequences_near_pair_angles() {
        for n in 2..=8usize {
            for theta in crate::angle::angles_of_exact_period::<BigUint>(n) {
                let m = 4 * n;
                let eps = BinaryAngle::<BigUint>::new(BigUint::from(1u8), BigUint::from(1u8) << m).unwrap();
                let plus = add(&theta, &eps);
                let minus = add(&theta, &sub_from_one(&eps));
                let nu = kneading_of_angle(&theta);
                let (a, abar) = upper_lower(&nu).unwrap();
                let len = (m - n).min(n * (m / (2 * n)));
                let above = kneading_of_angle(&plus).first(len);
                let below = kneading_of_angle(&minus).first(len);
                let limits = [a.first(len), abar.first(len)];
                assert!(
                    limits == [above.clone(), below.clone()] || limits == [below, above],
                    "{theta}"
                );
            }
        }
    }

    fn add(x: &BinaryAngle<BigUint>, y: &BinaryAngle<BigUint>) -> BinaryAngle<BigUint> {
        let num = x.numerator() * y.denominator() + y.numerator() * x.denominator();
        BinaryAngle::new(num, x.denominator() * y.denominator()).unwrap()
    }

    fn sub_from_one(y: &BinaryAngle<BigUint>) -> BinaryAngle<BigUint> {
        BinaryAngle::new(y.denominator() - y.numerator(), y.denominator().clone()).unwrap()
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn periodic_angles_give_star_sequences(a in 1u64..4095, n in 2usize..13) {
                let m = (1u64 << n) - 1;
                let theta = BinaryAngle::<u64>::periodic(a % m, n).unwrap();
                prop_assume!(!theta.is_zero());
                let p = theta.orbit_type().period;
                let nu = kneading_of_angle(&theta);
                prop_assert!(nu.is_star_periodic());
                prop_assert_eq!(nu.period(), p);
                let (a_res, abar) = upper_lower(&nu).unwrap();
                prop_assert_eq!(a_res.period(), p);
                prop_assert_eq!(p % abar.period(), 0);
            }

            #[test]
            fn preperiodic_angles_are_star_free(num in 1u64..2000, k in 1u32..6) {
                let den = 3u64.pow(k % 3 + 1) << k;
                let theta = BinaryAngle::<u64>::from_u64(num % den, den).unwrap();
                prop_assume!(!theta.is_periodic());
                let nu = kneading_of_angle(&theta);
                prop_assert!(!nu.is_star_periodic());
                prop_assert_eq!(nu.at(1), Symbol::One);
            }

            #[test]
            fn rho_is_first_disagreement(bits in proptest::collection::vec(0u8..2, 1..10), r in 1usize..20) {
                let nu = Kneading::from_bits(&bits).unwrap();
                match rho(&nu, r).unwrap() {
                    Rho::Finite(k) => {
                        prop_assert!(k > r);
                        prop_assert_ne!(nu.at(k), nu.at(k - r));
                        for j in r + 1..k {
                            prop_assert_eq!(nu.at(j), nu.at(j - r));
                        }
                    }
                    Rho::Infinity => prop_assert_eq!(r % nu.period(), 0),
                }
            }
        }
    }
}
