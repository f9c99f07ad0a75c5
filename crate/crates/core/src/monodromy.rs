//! Symbolic periodic and preperiodic points of `z² + c` for `c` outside the
//! Mandelbrot set, and the permutations induced by loops around parabolic
//! and Misiurewicz-Thurston parameters.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::angle::angles_of_exact_period;
use crate::components::{lavaurs_pairs, ray_pair_of, RayPair};
use crate::error::{Error, Result};
use crate::kneading::{kneading_of_angle, upper_lower, Kneading};
#[cfg(test)]
use crate::Angle64;

/// A symbolic point: an optional preperiodic prefix followed by a repeated
/// word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itinerary {
    prefix: Vec<u8>,
    word: Vec<u8>,
}

impl Itinerary {
    /// Normalizes to the shortest repeated word and the shortest prefix.
    pub fn new(prefix: Vec<u8>, word: Vec<u8>) -> Result<Self> {
        if word.is_empty() || prefix.iter().chain(&word).any(|&b| b > 1) {
            return Err(Error::ItinerarySyntax(format!("{prefix:?}{word:?}")));
        }
        let mut word = minimal_word(&word);
        let mut prefix = prefix;
        while let (Some(&p), Some(&w)) = (prefix.last(), word.last()) {
            if p != w {
                break;
            }
            prefix.pop();
            word.rotate_right(1);
        }
        Ok(Self { prefix, word })
    }

    pub fn periodic(word: Vec<u8>) -> Result<Self> {
        Self::new(Vec::new(), word)
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn preperiod(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    pub fn is_periodic(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn zeros_per_period(&self) -> usize {
        self.word.iter().filter(|&&b| b == 0).count()
    }

    pub fn shift(&self) -> Self {
        if let Some((_, rest)) = self.prefix.split_first() {
            Self {
                prefix: rest.to_vec(),
                word: self.word.clone(),
            }
        } else {
            let mut word = self.word.clone();
            word.rotate_left(1);
            Self { prefix: Vec::new(), word }
        }
    }

    fn prepend(&self, bit: u8) -> Self {
        let mut prefix = vec![bit];
        prefix.extend_from_slice(&self.prefix);
        Self::new(prefix, self.word.clone()).expect("bits are valid")
    }
}

fn minimal_word(word: &[u8]) -> Vec<u8> {
    let n = word.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| word[i] == word[i % d]))
        .map(|d| word[..d].to_vec())
        .expect("d = n always works")
}

fn bits_text(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "{}", bits_text(&self.word))
        } else {
            write!(f, "pre({})per({})", bits_text(&self.prefix), bits_text(&self.word))
        }
    }
}

impl FromStr for Itinerary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ItinerarySyntax(s.to_string());
        let bits = |t: &str| -> Result<Vec<u8>> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(bad()),
                })
                .collect()
        };
        let t = s.trim();
        let (prefix, word) = if let Some(rest) = t.strip_prefix("pre(") {
            let (p, rest) = rest.split_once(")per(").ok_or_else(bad)?;
            (bits(p)?, bits(rest.strip_suffix(')').ok_or_else(bad)?)?)
        } else if let Some(rest) = t.strip_prefix("per(") {
            (Vec::new(), bits(rest.strip_suffix(')').ok_or_else(bad)?)?)
        } else {
            (Vec::new(), bits(t)?)
        };
        if word.is_empty() {
            return Err(bad());
        }
        Self::new(prefix, word)
    }
}

impl Serialize for Itinerary {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// The number of binary words of exact period `n`.
pub fn count_points(n: usize) -> BigUint {
    let mut total: i128 = 0;
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        total += mobius(n / d) as i128 * (1i128 << d.min(126));
    }
    BigUint::from(total as u128)
}

/// The number of periodic orbits of exact period `n`.
pub fn count_orbits(n: usize) -> BigUint {
    count_points(n) / BigUint::from(n)
}

/// All itineraries of exact period `n`, in lexicographic order.
pub fn periodic_points(n: usize) -> Vec<Itinerary> {
    PeriodicPoints::new(n).points().to_vec()
}

/// A bijection of an indexed point set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Self {
            images: (0..len).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("images do not form a bijection".into()));
            }
        }
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self` after `first`.
    pub fn after(&self, first: &Self) -> Self {
        Self {
            images: first.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.images[i] != i).collect()
    }

    pub fn order(&self) -> BigUint {
        let mut seen = vec![false; self.len()];
        let mut order = BigUint::one();
        for start in 0..self.len() {
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len > 0 {
                order = num_integer::lcm(order, BigUint::from(len));
            }
        }
        order
    }
}

/// The points of exact period `n` with their shift map and orbits.
#[derive(Clone, Debug)]
pub struct PeriodicPoints {
    n: usize,
    points: Vec<Itinerary>,
    index: HashMap<Itinerary, usize>,
    shift: Permutation,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl PeriodicPoints {
    pub fn new(n: usize) -> Self {
        assert!((1..=24).contains(&n), "period {n} outside the supported range 1..=24");
        let points: Vec<Itinerary> = (0u64..1 << n)
            .map(|code| (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect::<Vec<u8>>())
            .filter(|w| minimal_word(w).len() == n)
            .map(|w| Itinerary { prefix: Vec::new(), word: w })
            .collect();
        let index: HashMap<Itinerary, usize> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let shift = Permutation {
            images: points.iter().map(|p| index[&p.shift()]).collect(),
        };
        let mut orbit_of = vec![usize::MAX; points.len()];
        let mut orbits = Vec::new();
        for start in 0..points.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let mut orbit = Vec::with_capacity(n);
            let mut i = start;
            for _ in 0..n {
                orbit_of[i] = orbits.len();
                orbit.push(i);
                i = shift.apply(i);
            }
            orbits.push(orbit);
        }
        Self {
            n,
            points,
            index,
            shift,
            orbits,
            orbit_of,
        }
    }

    pub fn period(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Itinerary] {
        &self.points
    }

    pub fn index_of(&self, x: &Itinerary) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn shift(&self) -> &Permutation {
        &self.shift
    }

    /// Orbits listed as `x, σx, σ²x, …` starting from their smallest word.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, i: usize) -> usize {
        self.orbit_of[i]
    }

    pub fn commutes_with_shift(&self, p: &Permutation) -> bool {
        p.after(&self.shift) == self.shift.after(p)
    }

    fn word_index(&self, word: &[u8]) -> usize {
        self.index[&Itinerary::periodic(word.to_vec()).expect("valid bits")]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopKind {
    Primitive,
    Satellite,
    MisiurewiczThurston,
    Lift,
}

/// The permutation induced by one loop around a puncture.
#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    pub kind: LoopKind,
    pub pair: Option<RayPair<u64>>,
    pub permutation: Permutation,
    /// Checked against the shift after construction.
    pub commutes_with_shift: bool,
}

/// The first `n` symbols of the two resolutions of the ★-periodic kneading
/// sequence of `pair`: A first, then Ā.
fn resolutions(pair: &RayPair<u64>, n: usize) -> Result<(Vec<u8>, Vec<u8>)> {
    let nu = if pair.is_seed() {
        Kneading::star_periodic(&[])
    } else {
        kneading_of_angle(pair.lower())
    };
    let (a, abar) = upper_lower(&nu)?;
    Ok((a.first_bits(n)?, abar.first_bits(n)?))
}

fn rotate(word: &[u8], j: usize) -> Vec<u8> {
    let mut w = word.to_vec();
    w.rotate_left(j % word.len());
    w
}

/// The swap `σʲ(A) ↔ σʲ(Ā)` at the root of a primitive component.
pub fn primitive_loop(points: &PeriodicPoints, pair: &RayPair<u64>) -> Result<Generator> {
    let n = points.period();
    let (a, abar) = resolutions(pair, n)?;
    if minimal_word(&a).len() != n || minimal_word(&abar).len() != n {
        return Err(Error::SatelliteRoot(pair.period()));
    }
    let mut images: Vec<usize> = (0..points.points().len()).collect();
    for j in 0..n {
        let x = points.word_index(&rotate(&a, j));
        let y = points.word_index(&rotate(&abar, j));
        images[x] = y;
        images[y] = x;
    }
    finish(points, LoopKind::Primitive, pair, images)
}

/// The rotation `σ^{n-k}` on the orbit of period `n` created at the root of
/// a satellite of a period-`k` component.
pub fn satellite_loop(points: &PeriodicPoints, pair: &RayPair<u64>) -> Result<Generator> {
    let n = points.period();
    let (a, abar) = resolutions(pair, n)?;
    let (pa, pb) = (minimal_word(&a).len(), minimal_word(&abar).len());
    let (moving, k) = match (pa == n, pb == n) {
        (true, false) => (a, pb),
        (false, true) => (abar, pa),
        _ => return Err(Error::PrimitiveRoot(pair.period())),
    };
    let mut images: Vec<usize> = (0..points.points().len()).collect();
    for j in 0..n {
        images[points.word_index(&rotate(&moving, j))] = points.word_index(&rotate(&moving, j + n - k));
    }
    finish(points, LoopKind::Satellite, pair, images)
}

fn finish(points: &PeriodicPoints, kind: LoopKind, pair: &RayPair<u64>, images: Vec<usize>) -> Result<Generator> {
    let permutation = Permutation::from_images(images)?;
    Ok(Generator {
        kind,
        pair: Some(pair.clone()),
        commutes_with_shift: points.commutes_with_shift(&permutation),
        permutation,
    })
}

/// The loop permutation at the root `pair`, primitive or satellite.
pub fn root_loop(points: &PeriodicPoints, pair: &RayPair<u64>) -> Result<Generator> {
    match primitive_loop(points, pair) {
        Err(Error::SatelliteRoot(_)) => satellite_loop(points, pair),
        other => other,
    }
}

/// One loop for each root of period `n`, by increasing lower angle. Period
/// 1 uses the root of the main cardioid.
pub fn generators(points: &PeriodicPoints) -> Result<Vec<Generator>> {
    let n = points.period();
    if n == 1 {
        return Ok(vec![primitive_loop(points, &RayPair::seed())?]);
    }
    let mut pairs: Vec<RayPair<u64>> = lavaurs_pairs(n).into_iter().filter(|p| p.period() == n).collect();
    pairs.sort_by(|a, b| a.lower().cmp(b.lower()));
    pairs.iter().map(|p| root_loop(points, p)).collect()
}

/// A group order that was either enumerated or skipped for size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupOrder {
    Computed(BigUint),
    Skipped,
}

impl GroupOrder {
    pub fn computed(&self) -> Option<&BigUint> {
        match self {
            GroupOrder::Computed(o) => Some(o),
            GroupOrder::Skipped => None,
        }
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Computed(o) => write!(f, "{o}"),
            GroupOrder::Skipped => write!(f, "SKIPPED"),
        }
    }
}

impl Serialize for GroupOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn big_to_string<S: Serializer>(v: &BigUint, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub n: usize,
    pub orbit_count: usize,
    pub point_count: usize,
    pub generator_count: usize,
    pub order: GroupOrder,
    /// `n^N · N!`, the order of the full centralizer of the shift.
    #[serde(serialize_with = "big_to_string")]
    pub centralizer_order: BigUint,
    pub transitive_on_points: bool,
    pub transitive_on_orbits: bool,
    pub kernel_full: bool,
    pub image_full: bool,
}

pub const DEFAULT_ENUMERATE_LIMIT: u64 = 10_000_000;

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// The order of the group of permutations commuting with the shift.
pub fn centralizer_order(n: usize) -> BigUint {
    let orbits = count_orbits(n).to_usize().expect("small period");
    BigUint::from(n).pow(orbits as u32) * factorial(orbits)
}

pub fn group_report(n: usize, enumerate_limit: u64) -> Result<GroupReport> {
    let points = PeriodicPoints::new(n);
    let gens = generators(&points)?;
    report_for(&points, &gens, enumerate_limit)
}

/// Structural flags and (when small enough) the order of the group
/// generated by `gens`.
pub fn report_for(points: &PeriodicPoints, gens: &[Generator], enumerate_limit: u64) -> Result<GroupReport> {
    let n = points.period();
    let perms: Vec<&Permutation> = gens.iter().map(|g| &g.permutation).collect();
    let orbit_count = points.orbits().len();
    let centralizer = centralizer_order(n);
    let equivariant = gens.iter().all(|g| g.commutes_with_shift);
    let order = if equivariant && centralizer <= BigUint::from(enumerate_limit) {
        GroupOrder::Computed(BigUint::from(centralizer_bfs(points, &perms)))
    } else {
        GroupOrder::Skipped
    };
    Ok(GroupReport {
        n,
        orbit_count,
        point_count: points.points().len(),
        generator_count: gens.len(),
        order,
        centralizer_order: centralizer,
        transitive_on_points: point_orbit(points.points().len(), &perms, 0).len() == points.points().len(),
        transitive_on_orbits: orbit_graph_components(points, &perms) == 1,
        kernel_full: equivariant && kernel_rotations(points, gens).is_some(),
        image_full: image_is_symmetric(points, &perms),
    })
}

fn point_orbit(len: usize, perms: &[&Permutation], start: usize) -> Vec<usize> {
    let mut seen = vec![false; len];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(i) = queue.pop_front() {
        out.push(i);
        for p in perms {
            let j = p.apply(i);
            if !std::mem::replace(&mut seen[j], true) {
                queue.push_back(j);
            }
        }
    }
    out
}

/// The permutation of orbits induced by `p`, if `p` maps orbits to orbits.
fn induced_on_orbits(points: &PeriodicPoints, p: &Permutation) -> Option<Vec<usize>> {
    let mut image = Vec::with_capacity(points.orbits().len());
    for orbit in points.orbits() {
        let target = points.orbit_of(p.apply(orbit[0]));
        if orbit.iter().any(|&i| points.orbit_of(p.apply(i)) != target) {
            return None;
        }
        image.push(target);
    }
    Some(image)
}

fn orbit_graph_components(points: &PeriodicPoints, perms: &[&Permutation]) -> usize {
    let m = points.orbits().len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for p in perms {
        for (o, orbit) in points.orbits().iter().enumerate() {
            let (a, b) = (find(&mut parent, o), find(&mut parent, points.orbit_of(p.apply(orbit[0]))));
            parent[a] = b;
        }
    }
    (0..m).filter(|&i| find(&mut parent, i) == i).count()
}

/// Whether the induced orbit permutations generate the full symmetric group.
fn image_is_symmetric(points: &PeriodicPoints, perms: &[&Permutation]) -> bool {
    let m = points.orbits().len();
    let mut induced = Vec::new();
    for p in perms {
        match induced_on_orbits(points, p) {
            Some(img) => induced.push(img),
            None => return false,
        }
    }
    let moved = |img: &Vec<usize>| (0..m).filter(|&i| img[i] != i).count();
    if induced.iter().all(|img| matches!(moved(img), 0 | 2)) {
        // transpositions generate S_m exactly when their graph is connected
        return orbit_graph_components(points, perms) == 1;
    }
    // general case, only for small m
    if m > 8 {
        return false;
    }
    let gens: Vec<Permutation> = induced.into_iter().map(|images| Permutation { images }).collect();
    let refs: Vec<&Permutation> = gens.iter().collect();
    permutation_group_order(m, &refs, u64::MAX) == Some(factorial(m).to_u64().expect("small"))
}

/// For each orbit, a product of generators rotating that orbit by one step
/// and fixing everything else; `None` if some orbit has none.
pub fn kernel_rotations(points: &PeriodicPoints, gens: &[Generator]) -> Option<Vec<Permutation>> {
    let n = points.period();
    let len = points.points().len();
    if n == 1 {
        return Some(vec![Permutation::identity(len); points.orbits().len()]);
    }
    let is_rotation_of = |p: &Permutation, orbit: &[usize]| -> bool {
        let support = p.support();
        let mut sorted = orbit.to_vec();
        sorted.sort_unstable();
        if support != sorted {
            return false;
        }
        let j = orbit.iter().position(|&i| i == p.apply(orbit[0])).expect("maps into the orbit");
        num_integer::gcd(j, n) == 1 && (0..n).all(|i| p.apply(orbit[i]) == orbit[(i + j) % n])
    };
    let (base, base_orbit) = gens.iter().find_map(|g| {
        let support = g.permutation.support();
        let orbit = points.orbit_of(*support.first()?);
        is_rotation_of(&g.permutation, &points.orbits()[orbit]).then(|| (g.permutation.clone(), orbit))
    })?;
    // walk the orbit-swap graph from the base orbit, accumulating a
    // conjugator that carries each reached orbit onto the base orbit
    let m = points.orbits().len();
    let mut carry: Vec<Option<Permutation>> = vec![None; m];
    carry[base_orbit] = Some(Permutation::identity(len));
    let mut queue = VecDeque::from([base_orbit]);
    while let Some(o) = queue.pop_front() {
        let h = carry[o].clone().expect("visited");
        for g in gens {
            let target = points.orbit_of(g.permutation.apply(points.orbits()[o][0]));
            if carry[target].is_none() {
                // h sends orbit o to the base; g sends o to target
                carry[target] = Some(h.after(&g.permutation.inverse()));
                queue.push_back(target);
            }
        }
    }
    let mut out = Vec::with_capacity(m);
    for (o, h) in carry.into_iter().enumerate() {
        let h = h?;
        let rotation = h.inverse().after(&base.after(&h));
        if !is_rotation_of(&rotation, &points.orbits()[o]) {
            return None;
        }
        out.push(rotation);
    }
    Some(out)
}

/// Elements of the shift centralizer as an orbit permutation plus one
/// rotation per orbit, ranked densely in `0..n^N · N!`.
struct Centralizer {
    n: usize,
    m: usize,
    rotations: u64,
}

impl Centralizer {
    fn encode(&self, perm: &[u8], shift: &[u8]) -> u64 {
        let mut rank = 0u64;
        for i in 0..self.m {
            let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count() as u64;
            rank = rank * (self.m - i) as u64 + smaller;
        }
        let mut t = 0u64;
        for &s in shift.iter().rev() {
            t = t * self.n as u64 + s as u64;
        }
        rank * self.rotations + t
    }

    fn decode(&self, code: u64, perm: &mut [u8], shift: &mut [u8]) {
        let mut t = code % self.rotations;
        for s in shift.iter_mut() {
            *s = (t % self.n as u64) as u8;
            t /= self.n as u64;
        }
        let mut rank = code / self.rotations;
        let mut digits = vec![0u64; self.m];
        for i in (0..self.m).rev() {
            let base = (self.m - i) as u64;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<u8> = (0..self.m as u8).collect();
        for i in 0..self.m {
            perm[i] = pool.remove(digits[i] as usize);
        }
    }
}

/// Enumerates the group generated by shift-commuting permutations through
/// their centralizer coordinates.
fn centralizer_bfs(points: &PeriodicPoints, perms: &[&Permutation]) -> u64 {
    let n = points.period();
    let m = points.orbits().len();
    let c = Centralizer {
        n,
        m,
        rotations: (n as u64).pow(m as u32),
    };
    let coords: Vec<(Vec<u8>, Vec<u8>)> = perms
        .iter()
        .map(|p| {
            let mut perm = vec![0u8; m];
            let mut shift = vec![0u8; m];
            for (o, orbit) in points.orbits().iter().enumerate() {
                let img = p.apply(orbit[0]);
                let target = points.orbit_of(img);
                perm[o] = target as u8;
                shift[o] = points.orbits()[target].iter().position(|&i| i == img).expect("in orbit") as u8;
            }
            (perm, shift)
        })
        .collect();
    let total = factorial(m).to_u64().expect("bounded by the limit") * c.rotations;
    let visited: Vec<AtomicU64> = (0..total.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    let mark = |code: u64| {
        let bit = 1u64 << (code % 64);
        visited[(code / 64) as usize].fetch_or(bit, Ordering::Relaxed) & bit == 0
    };
    let identity_perm: Vec<u8> = (0..m as u8).collect();
    let start = c.encode(&identity_perm, &vec![0; m]);
    mark(start);
    let mut count = 1u64;
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let mut next: Vec<u64> = frontier
            .par_chunks(4096)
            .flat_map_iter(|chunk| {
                let mut perm = vec![0u8; m];
                let mut shift = vec![0u8; m];
                let mut new_perm = vec![0u8; m];
                let mut new_shift = vec![0u8; m];
                let mut found = Vec::new();
                for &code in chunk {
                    c.decode(code, &mut perm, &mut shift);
                    for (gp, gs) in &coords {
                        for o in 0..m {
                            let mid = perm[o] as usize;
                            new_perm[o] = gp[mid];
                            new_shift[o] = ((shift[o] as usize + gs[mid] as usize) % n) as u8;
                        }
                        let code = c.encode(&new_perm, &new_shift);
                        if mark(code) {
                            found.push(code);
                        }
                    }
                }
                found
            })
            .collect();
        next.sort_unstable();
        count += next.len() as u64;
        frontier = next;
    }
    count
}

/// Order of a permutation group by plain enumeration, or `None` past `limit`.
pub fn permutation_group_order(len: usize, gens: &[&Permutation], limit: u64) -> Option<u64> {
    let id = Permutation::identity(len);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for g in gens {
                let x = g.after(e);
                if !seen.contains(&x) {
                    seen.insert(x.clone());
                    if seen.len() as u64 > limit {
                        return None;
                    }
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    Some(seen.len() as u64)
}

/// One loop of a zero-reduction path.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionStep {
    pub pair: RayPair<u64>,
    /// The maximal shift of the current itinerary, equal to the kneading
    /// sequence of the narrow component rooted at `pair`.
    pub from: Itinerary,
    /// `from` with its last symbol replaced by 1.
    pub to: Itinerary,
}

/// Loops at primitive narrow roots that carry the orbit of `tau` to the
/// orbit with a single 0 per period, one 0 at a time.
pub fn zero_reduction_path(tau: &Itinerary) -> Result<Vec<ReductionStep>> {
    if !tau.is_periodic() {
        return Err(Error::InvalidArgument(format!("{tau} is not periodic")));
    }
    if tau.zeros_per_period() == 0 {
        return Err(Error::InvalidArgument(format!("{tau} has no 0 to reduce towards")));
    }
    let n = tau.period();
    let points = PeriodicPoints::new(n);
    let mut current = tau.word().to_vec();
    let mut steps = Vec::new();
    while current.iter().filter(|&&b| b == 0).count() >= 2 {
        let top = (0..n).map(|j| rotate(&current, j)).max().expect("n ≥ 1");
        let body: Vec<u8> = top[..n - 1].to_vec();
        let target = Kneading::star_periodic(&body);
        let pair = narrow_root_with_kneading(&target, n)?;
        let step = primitive_loop(&points, &pair)?;
        let mut to = top.clone();
        to[n - 1] = 1;
        let from_index = points.word_index(&top);
        if step.permutation.apply(from_index) != points.word_index(&to) {
            return Err(Error::Irreducible(bits_text(&top), format!("the loop at {pair} does not reach {}", bits_text(&to))));
        }
        steps.push(ReductionStep {
            pair,
            from: Itinerary::periodic(top)?,
            to: Itinerary::periodic(to.clone())?,
        });
        current = to;
    }
    Ok(steps)
}

/// A narrow ray pair of period `n` whose angles have kneading `target`.
fn narrow_root_with_kneading(target: &Kneading, n: usize) -> Result<RayPair<u64>> {
    let mut seen = HashSet::new();
    for x in angles_of_exact_period::<u64>(n) {
        if kneading_of_angle(&x) != *target || seen.contains(&x) {
            continue;
        }
        let pair = ray_pair_of(&x)?;
        seen.insert(pair.lower().clone());
        seen.insert(pair.upper().clone());
        if pair.is_narrow() {
            return Ok(pair);
        }
    }
    Err(Error::Irreducible(target.to_string(), "no narrow component has this kneading sequence".into()))
}

/// The preperiodic points of exact preperiod `k` and period `n`.
#[derive(Clone, Debug)]
pub struct PreperiodicPoints {
    k: usize,
    n: usize,
    points: Vec<Itinerary>,
    index: HashMap<Itinerary, usize>,
}

impl PreperiodicPoints {
    pub fn new(k: usize, n: usize) -> Self {
        assert!(k >= 1, "preperiod must be positive");
        let periodic = PeriodicPoints::new(n);
        let mut points = Vec::new();
        for y in periodic.points() {
            // the unique non-periodic preimage of y, then free choices above it
            let last_of_pred = y.word()[n - 1];
            let first = y.prepend(1 - last_of_pred);
            let mut level = vec![first];
            for _ in 1..k {
                level = level.iter().flat_map(|x| [x.prepend(0), x.prepend(1)]).collect();
            }
            points.extend(level);
        }
        points.sort();
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Self { k, n, points, index }
    }

    pub fn preperiod(&self) -> usize {
        self.k
    }

    pub fn period(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Itinerary] {
        &self.points
    }

    pub fn index_of(&self, x: &Itinerary) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// The lift of a periodic permutation: keep the first `k - 1` symbols and
    /// move the periodic part.
    fn lift(&self, periodic: &PeriodicPoints, p: &Permutation) -> Permutation {
        let images = self
            .points
            .iter()
            .map(|x| {
                let mut tail = x.clone();
                for _ in 0..self.k {
                    tail = tail.shift();
                }
                let moved = &periodic.points()[p.apply(periodic.index_of(&tail).expect("periodic tail"))];
                let mut y = moved.prepend(1 - moved.word()[self.n - 1]);
                for &b in x.prefix()[..self.k - 1].iter().rev() {
                    y = y.prepend(b);
                }
                self.index[&y]
            })
            .collect();
        Permutation { images }
    }

    /// The swap `τ0ν ↔ τ1ν` for `ν = 1^j (1^{n-1}0)^∞`.
    fn misiurewicz_swap(&self, j: usize) -> Permutation {
        let mut word = vec![1u8; self.n];
        word[self.n - 1] = 0;
        let nu = Itinerary::new(vec![1; j], word).expect("valid bits");
        let mut images: Vec<usize> = (0..self.points.len()).collect();
        for (i, x) in self.points.iter().enumerate() {
            let split = self.k - j - 1;
            let (head, rest) = x.prefix().split_at(split);
            let rest_point = Itinerary::new(rest[1..].to_vec(), x.word().to_vec()).expect("valid bits");
            if rest_point == nu {
                let mut prefix = head.to_vec();
                prefix.push(1 - rest[0]);
                prefix.extend_from_slice(&rest[1..]);
                let partner = Itinerary::new(prefix, x.word().to_vec()).expect("valid bits");
                images[i] = self.index[&partner];
            }
        }
        Permutation { images }
    }

    /// Whether `p` is compatible with the dynamics: applying the shift
    /// repeatedly induces well-defined maps down to a shift-commuting
    /// permutation of the periodic points.
    pub fn commutes_with_dynamics(&self, p: &Permutation) -> bool {
        let mut current: Vec<(Itinerary, Itinerary)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), self.points[p.apply(i)].clone()))
            .collect();
        for _ in 0..self.k {
            let mut map: HashMap<Itinerary, Itinerary> = HashMap::new();
            for (x, y) in &current {
                let (sx, sy) = (x.shift(), y.shift());
                if let Some(prev) = map.insert(sx, sy.clone()) {
                    if prev != sy {
                        return false;
                    }
                }
            }
            current = map.into_iter().collect();
        }
        let map: HashMap<Itinerary, Itinerary> = current.into_iter().collect();
        map.iter().all(|(x, y)| map.get(&x.shift()) == Some(&y.shift()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PreperiodicReport {
    pub k: usize,
    pub n: usize,
    pub point_count: usize,
    pub generator_count: usize,
    pub order: GroupOrder,
    /// `n^N · N! · 2^{P(2^{k-1} - 1)}` with `P` periodic points of period `n`.
    #[serde(serialize_with = "big_to_string")]
    pub centralizer_order: BigUint,
    pub all_commute: bool,
}

/// Swaps at the Misiurewicz-Thurston parameters with kneading
/// `1^j (1^{n-1}0)^∞` for `j < k`, followed by the lifts of the loops at
/// roots of period `n`.
pub fn preperiodic_generators(points: &PreperiodicPoints) -> Result<Vec<Generator>> {
    let periodic = PeriodicPoints::new(points.n);
    let mut out = Vec::new();
    for j in 1..points.k {
        let permutation = points.misiurewicz_swap(j);
        out.push(Generator {
            kind: LoopKind::MisiurewiczThurston,
            pair: None,
            commutes_with_shift: points.commutes_with_dynamics(&permutation),
            permutation,
        });
    }
    for g in generators(&periodic)? {
        let permutation = points.lift(&periodic, &g.permutation);
        out.push(Generator {
            kind: LoopKind::Lift,
            pair: g.pair,
            commutes_with_shift: points.commutes_with_dynamics(&permutation),
            permutation,
        });
    }
    Ok(out)
}

pub fn preperiodic_centralizer_order(k: usize, n: usize) -> BigUint {
    let p = count_points(n).to_u32().expect("small period");
    let inner = (1u32 << (k - 1)) - 1;
    centralizer_order(n) * (BigUint::one() << (p * inner))
}

pub fn preperiodic_report(k: usize, n: usize, enumerate_limit: u64) -> Result<PreperiodicReport> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("preperiod and period must be positive".into()));
    }
    let points = PreperiodicPoints::new(k, n);
    let gens = preperiodic_generators(&points)?;
    let centralizer = preperiodic_centralizer_order(k, n);
    let perms: Vec<&Permutation> = gens.iter().map(|g| &g.permutation).collect();
    let order = if centralizer <= BigUint::from(enumerate_limit) {
        match permutation_group_order(points.points().len(), &perms, enumerate_limit) {
            Some(o) => GroupOrder::Computed(BigUint::from(o)),
            None => GroupOrder::Skipped,
        }
    } else {
        GroupOrder::Skipped
    };
    Ok(PreperiodicReport {
        k,
        n,
        point_count: points.points().len(),
        generator_count: gens.len(),
        order,
        centralizer_order: centralizer,
        all_commute: gens.iter().all(|g| g.commutes_with_shift),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle(a: u64, d: u64) -> Angle64 {
        Angle64::from_u64(a, d).unwrap()
    }

    fn it(s: &str) -> Itinerary {
        s.parse().unwrap()
    }

    fn pair(a: (u64, u64), b: (u64, u64)) -> RayPair<u64> {
        RayPair::new(angle(a.0, a.1), angle(b.0, b.1)).unwrap()
    }

    fn cycles(points: &PeriodicPoints, p: &Permutation) -> Vec<Vec<String>> {
        let mut seen = vec![false; p.len()];
        let mut out = Vec::new();
        for s in 0..p.len() {
            if seen[s] || p.apply(s) == s {
                continue;
            }
            let mut c = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                c.push(points.points()[i].to_string());
                i = p.apply(i);
            }
            out.push(c);
        }
        out
    }

    #[test]
    fn itinerary_normal_form() {
        assert_eq!(it("1010").to_string(), "10");
        assert_eq!(it("pre(0)per(10)").to_string(), "01");
        assert_eq!(it("pre(1)per(10)").to_string(), "pre(1)per(10)");
        assert_eq!(it("pre(1)per(01)").to_string(), "10");
        assert_eq!(it("pre(01)per(1)").preperiod(), 1);
        assert_eq!(it("pre(10)per(1)").preperiod(), 2);
        assert!("pre(2)per(1)".parse::<Itinerary>().is_err());
        assert!("".parse::<Itinerary>().is_err());
    }

    #[test]
    fn counts() {
        let orbits: Vec<u64> = (1..=6).map(|n| count_orbits(n).to_u64().unwrap()).collect();
        assert_eq!(orbits, vec![2, 1, 2, 3, 6, 9]);
        assert_eq!(periodic_points(1).iter().map(|p| p.to_string()).collect::<Vec<_>>(), ["0", "1"]);
        let three: Vec<String> = periodic_points(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(three, ["001", "010", "011", "100", "101", "110"]);
        assert_eq!(PeriodicPoints::new(4).orbits().len(), 3);
        for n in 1..=12 {
            assert_eq!(BigUint::from(periodic_points(n).len()), count_points(n));
        }
    }

    #[test]
    fn loop_examples() {
        let p3 = PeriodicPoints::new(3);
        let g = primitive_loop(&p3, &pair((3, 7), (4, 7))).unwrap();
        let mut c = cycles(&p3, &g.permutation);
        c.iter_mut().for_each(|x| x.sort());
        c.sort();
        assert_eq!(c, vec![vec!["001", "011"], vec!["010", "110"], vec!["100", "101"]]);
        assert!(g.commutes_with_shift);
        let s = satellite_loop(&p3, &pair((1, 7), (2, 7))).unwrap();
        let c = cycles(&p3, &s.permutation);
        assert_eq!(c.len(), 1);
        let mut orbit = c[0].clone();
        orbit.sort();
        assert_eq!(orbit, ["011", "101", "110"]);
        assert_eq!(
            primitive_loop(&p3, &pair((1, 7), (2, 7))).unwrap_err(),
            Error::SatelliteRoot(3)
        );
        let p2 = PeriodicPoints::new(2);
        assert_eq!(primitive_loop(&p2, &pair((1, 3), (2, 3))).unwrap_err(), Error::SatelliteRoot(2));
        let two = satellite_loop(&p2, &pair((1, 3), (2, 3))).unwrap();
        assert_eq!(cycles(&p2, &two.permutation), vec![vec!["01", "10"]]);
        assert_eq!(satellite_loop(&p3, &pair((3, 7), (4, 7))).unwrap_err(), Error::PrimitiveRoot(3));
    }

    #[test]
    fn generator_lists() {
        let one = generators(&PeriodicPoints::new(1)).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].permutation.images(), &[1, 0]);
        let three = generators(&PeriodicPoints::new(3)).unwrap();
        let kinds: Vec<LoopKind> = three.iter().map(|g| g.kind).collect();
        assert_eq!(kinds, [LoopKind::Satellite, LoopKind::Primitive, LoopKind::Satellite]);
        for n in 1..=7 {
            assert!(generators(&PeriodicPoints::new(n)).unwrap().iter().all(|g| g.commutes_with_shift));
        }
    }

    #[test]
    fn reports() {
        let orders: Vec<String> = (1..=4)
            .map(|n| group_report(n, DEFAULT_ENUMERATE_LIMIT).unwrap().order.to_string())
            .collect();
        assert_eq!(orders, ["2", "2", "18", "384"]);
        let r = group_report(3, DEFAULT_ENUMERATE_LIMIT).unwrap();
        assert!(r.transitive_on_points && r.transitive_on_orbits && r.kernel_full && r.image_full);
        assert_eq!(group_report(6, 100).unwrap().order, GroupOrder::Skipped);
    }

    #[test]
    fn reduction_examples() {
        let path = zero_reduction_path(&it("100")).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(path[0].pair, pair((3, 7), (4, 7)));
        assert_eq!(path[0].to.to_string(), "101");
        let path = zero_reduction_path(&it("1100")).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(path[0].to.to_string(), "1101");
        assert!(zero_reduction_path(&it("1110")).unwrap().is_empty());
        assert!(zero_reduction_path(&it("1")).is_err());
    }

    #[test]
    fn preperiodic_sets() {
        let p = PreperiodicPoints::new(1, 1);
        let names: Vec<String> = p.points().iter().map(|x| x.to_string()).collect();
        assert_eq!(names, ["pre(0)per(1)", "pre(1)per(0)"]);
        assert_eq!(PreperiodicPoints::new(3, 2).points().len(), 8);
        let r = preperiodic_report(1, 1, 1000).unwrap();
        assert_eq!(r.order.to_string(), "2");
        assert_eq!(preperiodic_centralizer_order(2, 2), BigUint::from(8u8));
    }
}
