//! Periodic ray pairs, hyperbolic components and their wakes.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::address::{angled_address_of_angle, AngledEntry, AngledInternalAddress, InternalAngle};
use crate::angle::{exact_period_numerators, mersenne, AngleInt, BinaryAngle};
use crate::error::{Error, Result};
use crate::kneading::{internal_address_of, kneading_of_address, kneading_of_angle, rho, InternalAddress, Rho};

/// Two parameter rays of equal period landing together, `lower < upper`.
///
/// The seed pair `RP(0, 1)` of period 1 is stored with both angles 0 and
/// bounds the whole circle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RayPair<T> {
    lower: BinaryAngle<T>,
    upper: BinaryAngle<T>,
    period: usize,
}

impl<T: AngleInt> RayPair<T> {
    pub fn seed() -> Self {
        Self {
            lower: BinaryAngle::zero(),
            upper: BinaryAngle::zero(),
            period: 1,
        }
    }

    pub fn new(a: BinaryAngle<T>, b: BinaryAngle<T>) -> Result<Self> {
        let period = a.orbit_type().period;
        if !a.is_periodic() || !b.is_periodic() || b.orbit_type().period != period || a == b {
            return Err(Error::NoRayPair(format!("({a}, {b})")));
        }
        let (lower, upper) = if a < b { (a, b) } else { (b, a) };
        Ok(Self {
            lower,
            upper,
            period,
        })
    }

    pub fn lower(&self) -> &BinaryAngle<T> {
        &self.lower
    }

    pub fn upper(&self) -> &BinaryAngle<T> {
        &self.upper
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn is_seed(&self) -> bool {
        self.period == 1
    }

    pub fn width(&self) -> Ratio<T> {
        if self.is_seed() {
            return Ratio::one();
        }
        self.upper.to_ratio() - self.lower.to_ratio()
    }

    pub fn is_narrow(&self) -> bool {
        self.width() == Ratio::new(T::one(), mersenne(self.period))
    }

    /// Whether `x` lies strictly inside the wake.
    pub fn wake_contains_angle(&self, x: &BinaryAngle<T>) -> bool {
        if self.is_seed() {
            !x.is_zero()
        } else {
            self.lower < *x && *x < self.upper
        }
    }

    /// Whether `other` lies strictly inside the wake of `self`.
    pub fn wake_contains(&self, other: &Self) -> bool {
        if other.is_seed() {
            return false;
        }
        self.wake_contains_angle(&other.lower) && self.wake_contains_angle(&other.upper)
    }

    pub fn has_endpoint(&self, x: &BinaryAngle<T>) -> bool {
        self.lower == *x || self.upper == *x
    }

    fn upper_text(&self) -> String {
        if self.is_seed() {
            "1/1".to_string()
        } else {
            self.upper.to_string()
        }
    }
}

impl<T: AngleInt> fmt::Display for RayPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper_text())
    }
}

impl<T: AngleInt> fmt::Debug for RayPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RP{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct RayPairRepr {
    lower: String,
    upper: String,
    period: usize,
}

impl<T: AngleInt> Serialize for RayPair<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RayPairRepr {
            lower: self.lower.to_string(),
            upper: self.upper_text(),
            period: self.period,
        }
        .serialize(serializer)
    }
}

impl<'de, T: AngleInt> Deserialize<'de> for RayPair<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RayPairRepr::deserialize(deserializer)?;
        let lower: BinaryAngle<T> = repr.lower.parse().map_err(D::Error::custom)?;
        let upper: BinaryAngle<T> = repr.upper.parse().map_err(D::Error::custom)?;
        if repr.period == 1 && lower.is_zero() && upper.is_zero() {
            return Ok(Self::seed());
        }
        let pair = Self::new(lower, upper).map_err(D::Error::custom)?;
        if pair.period != repr.period {
            return Err(D::Error::custom("period does not match the angles"));
        }
        Ok(pair)
    }
}

/// A hyperbolic component identified by the ray pair at its root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: AngleInt", deserialize = "T: AngleInt"))]
pub struct HyperbolicComponent<T: AngleInt> {
    pub root: RayPair<T>,
    pub internal_address: InternalAddress,
    pub angled_address: AngledInternalAddress,
}

impl<T: AngleInt> HyperbolicComponent<T> {
    pub fn from_pair(root: RayPair<T>) -> Result<Self> {
        let angled_address = if root.is_seed() {
            AngledInternalAddress::new(vec![AngledEntry { period: 1, angle: None }], false)?
        } else {
            angled_address_of_angle(&root.lower, root.period)?
        };
        Ok(Self {
            internal_address: angled_address.internal_address(),
            root,
            angled_address,
        })
    }

    pub fn period(&self) -> usize {
        self.root.period
    }

    pub fn width(&self) -> Ratio<T> {
        self.root.width()
    }

    pub fn is_narrow(&self) -> bool {
        self.root.is_narrow()
    }
}

/// Whether `inner`'s root lies strictly inside the wake of `outer`.
pub fn wake_contains<T: AngleInt>(outer: &HyperbolicComponent<T>, inner: &HyperbolicComponent<T>) -> bool {
    outer.root.wake_contains(&inner.root)
}

/// `|W| (2^n - 1)² / (2^{qn} - 1)`.
pub fn subwake_width<T: AngleInt>(width: &Ratio<T>, n: usize, q: usize) -> Ratio<T> {
    let m = mersenne::<T>(n);
    width * Ratio::new(m.clone() * m, mersenne(q * n))
}

#[derive(Clone, Debug)]
pub struct TreeNode<T: AngleInt> {
    pub pair: RayPair<T>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// All ray pairs of period at most `max_period` inside a wake, nested by
/// wake inclusion. Node 0 is the pair bounding the wake.
#[derive(Clone, Debug)]
pub struct ComponentTree<T: AngleInt> {
    nodes: Vec<TreeNode<T>>,
    max_period: usize,
    by_angle: HashMap<BinaryAngle<T>, usize>,
}

impl<T: AngleInt> ComponentTree<T> {
    /// The tree of all components of period at most `max_period`.
    pub fn new(max_period: usize) -> Self {
        Self::within(&RayPair::seed(), max_period)
    }

    /// The tree of `outer` and all components of period at most
    /// `max_period` inside its wake.
    pub fn within(outer: &RayPair<T>, max_period: usize) -> Self {
        let mut pairs = vec![outer.clone()];
        // chord endpoints sorted by angle; `true` opens a wake
        let mut endpoints: Vec<(BinaryAngle<T>, bool, usize)> = Vec::new();
        for k in 2..=max_period {
            let angles = angles_in_wake(outer, k);
            if angles.is_empty() {
                continue;
            }
            let regions = innermost_regions(&angles, &endpoints);
            let first_new = pairs.len();
            let mut stack: Vec<usize> = Vec::new();
            for j in 0..angles.len() {
                match stack.last() {
                    Some(&i) if regions[i] == regions[j] => {
                        stack.pop();
                        pairs.push(RayPair {
                            lower: angles[i].clone(),
                            upper: angles[j].clone(),
                            period: k,
                        });
                    }
                    _ => stack.push(j),
                }
            }
            assert!(stack.is_empty(), "period {k} angles left unpaired");
            for (id, p) in pairs.iter().enumerate().skip(first_new) {
                endpoints.push((p.lower.clone(), true, id));
                endpoints.push((p.upper.clone(), false, id));
            }
            endpoints.sort_by(|a, b| a.0.cmp(&b.0));
        }
        pairs[1..].sort_by(|a, b| (a.period, &a.lower).cmp(&(b.period, &b.lower)));
        let nodes = nest(pairs);
        let mut by_angle = HashMap::new();
        for (i, n) in nodes.iter().enumerate().skip(1) {
            by_angle.insert(n.pair.lower.clone(), i);
            by_angle.insert(n.pair.upper.clone(), i);
        }
        Self {
            nodes,
            max_period,
            by_angle,
        }
    }

    pub fn max_period(&self) -> usize {
        self.max_period
    }

    pub fn nodes(&self) -> &[TreeNode<T>] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &TreeNode<T> {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &RayPair<T> {
        &self.nodes[0].pair
    }

    /// The ray pairs below the root, by period and then lower angle.
    pub fn pairs(&self) -> Vec<RayPair<T>> {
        self.nodes[1..].iter().map(|n| n.pair.clone()).collect()
    }

    /// The node whose root pair has `x` as an endpoint.
    pub fn find_angle(&self, x: &BinaryAngle<T>) -> Option<usize> {
        self.by_angle.get(x).copied()
    }

    pub fn find_pair(&self, pair: &RayPair<T>) -> Option<usize> {
        if pair == self.root() {
            return Some(0);
        }
        self.find_angle(&pair.lower).filter(|&i| self.nodes[i].pair == *pair)
    }

    /// `i` and everything nested in its wake, in depth-first order.
    pub fn subtree(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut todo = vec![i];
        while let Some(j) = todo.pop() {
            out.push(j);
            todo.extend(self.nodes[j].children.iter().rev());
        }
        out
    }

    /// The strict ancestors of `i`, innermost first.
    pub fn ancestors(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.nodes[i].parent;
        while let Some(j) = cur {
            out.push(j);
            cur = self.nodes[j].parent;
        }
        out
    }

    pub fn component(&self, i: usize) -> Result<HyperbolicComponent<T>> {
        HyperbolicComponent::from_pair(self.nodes[i].pair.clone())
    }

    /// Whether the wake of node `i` contains a node of lower period.
    pub fn has_lower_period_inside(&self, i: usize) -> bool {
        let period = self.nodes[i].pair.period;
        self.subtree(i)
            .into_iter()
            .skip(1)
            .any(|j| self.nodes[j].pair.period < period)
    }

    /// Checks the even-count rule for period `s` in the wake of node `i`:
    /// the number of angles of period dividing `s` inside the wake is the
    /// even one of the two integers nearest `width · (2^s - 1)`. Returns
    /// `None` when the wake endpoints themselves have period dividing `s`
    /// or when no even candidate exists.
    pub fn counting_rule(&self, i: usize, s: usize) -> Option<bool> {
        let pair = &self.nodes[i].pair;
        if s.is_multiple_of(pair.period) {
            return None;
        }
        let m = mersenne::<T>(s);
        let scaled = pair.width() * Ratio::from_integer(m.clone());
        let (lo, hi) = (scaled.floor().to_integer(), scaled.ceil().to_integer());
        let expected = [lo, hi].into_iter().find(|c| c.is_even())?;
        let count = grid_count(pair, &m);
        Some(count == expected)
    }
}

/// The number of angles `a / m` strictly inside the wake of `pair`.
fn grid_count<T: AngleInt>(pair: &RayPair<T>, m: &T) -> T {
    if pair.is_seed() {
        return m.clone() - T::one();
    }
    let (first, last) = numerator_range(pair, m);
    if last < first {
        T::zero()
    } else {
        last - first + T::one()
    }
}

/// The numerators `a` with `a / m` strictly inside the wake of a non-seed
/// pair, as an inclusive range.
fn numerator_range<T: AngleInt>(pair: &RayPair<T>, m: &T) -> (T, T) {
    let lo = pair.lower.numerator().clone() * m.clone();
    let first = lo / pair.lower.denominator().clone() + T::one();
    let hi = pair.upper.numerator().clone() * m.clone();
    let d = pair.upper.denominator().clone();
    let (q, r) = hi.div_rem(&d);
    let last = if r.is_zero() { q - T::one() } else { q };
    (first, last)
}

/// Angles of exact period `k` strictly inside the wake, sorted.
fn angles_in_wake<T: AngleInt>(outer: &RayPair<T>, k: usize) -> Vec<BinaryAngle<T>> {
    let m = mersenne::<T>(k);
    let (first, last) = if outer.is_seed() {
        (T::one(), m.clone() - T::one())
    } else {
        numerator_range(outer, &m)
    };
    if last < first {
        return Vec::new();
    }
    exact_period_numerators::<T>(k, first, last + T::one())
        .into_iter()
        .map(|a| BinaryAngle::new(a, m.clone()).expect("positive denominator"))
        .collect()
}

/// For each sorted angle, the id of the innermost chord whose wake contains
/// it, or 0 when none does.
fn innermost_regions<T: AngleInt>(
    angles: &[BinaryAngle<T>],
    endpoints: &[(BinaryAngle<T>, bool, usize)],
) -> Vec<usize> {
    let mut out = Vec::with_capacity(angles.len());
    let mut open: Vec<usize> = Vec::new();
    let mut e = 0;
    for x in angles {
        while e < endpoints.len() && endpoints[e].0 < *x {
            let (_, opens, id) = &endpoints[e];
            if *opens {
                open.push(*id);
            } else {
                open.pop();
            }
            e += 1;
        }
        out.push(open.last().copied().unwrap_or(0));
    }
    out
}

/// Builds parent and child links from wake inclusion; `pairs[0]` is the
/// enclosing root.
fn nest<T: AngleInt>(pairs: Vec<RayPair<T>>) -> Vec<TreeNode<T>> {
    let mut events: Vec<(&BinaryAngle<T>, bool, usize)> = Vec::with_capacity(2 * pairs.len());
    for (i, p) in pairs.iter().enumerate().skip(1) {
        events.push((&p.lower, true, i));
        events.push((&p.upper, false, i));
    }
    events.sort_by(|a, b| a.0.cmp(b.0));
    let mut parent = vec![None; pairs.len()];
    let mut open = vec![0usize];
    for (_, opens, id) in events {
        if opens {
            parent[id] = open.last().copied();
            open.push(id);
        } else {
            open.pop();
        }
    }
    let mut nodes: Vec<TreeNode<T>> = pairs
        .into_iter()
        .zip(parent)
        .map(|(pair, parent)| TreeNode {
            pair,
            parent,
            children: Vec::new(),
        })
        .collect();
    for i in 1..nodes.len() {
        let p = nodes[i].parent.expect("non-root nodes have a parent");
        nodes[p].children.push(i);
    }
    for i in 0..nodes.len() {
        let mut children = std::mem::take(&mut nodes[i].children);
        children.sort_by(|&a, &b| nodes[a].pair.lower.cmp(&nodes[b].pair.lower));
        nodes[i].children = children;
    }
    nodes
}

/// All ray pairs of periods `2..=max_period`, by period and lower angle.
pub fn lavaurs_pairs<T: AngleInt>(max_period: usize) -> Vec<RayPair<T>> {
    ComponentTree::new(max_period).pairs()
}

/// The ray pairs of period at most `max_period` inside the wake of `outer`.
pub fn lavaurs_pairs_within<T: AngleInt>(outer: &RayPair<T>, max_period: usize) -> Vec<RayPair<T>> {
    ComponentTree::within(outer, max_period).pairs()
}

/// The ray pair containing the periodic angle `theta`, found by descending
/// through the wakes named by its internal address.
pub fn ray_pair_of<T: AngleInt>(theta: &BinaryAngle<T>) -> Result<RayPair<T>> {
    if theta.is_zero() {
        return Err(Error::SeedAngle);
    }
    if !theta.is_periodic() {
        return Err(Error::NotPeriodic(theta.to_string()));
    }
    let n = theta.orbit_type().period;
    let addr = internal_address_of(&kneading_of_angle(theta), n)?;
    let mut current = RayPair::seed();
    for &s in &addr.entries()[1..] {
        let tree = ComponentTree::within(&current, s);
        let next = tree.nodes()[1..]
            .iter()
            .map(|node| &node.pair)
            .find(|p| p.period == s && (p.has_endpoint(theta) || p.wake_contains_angle(theta)))
            .ok_or_else(|| Error::NoRayPair(theta.to_string()))?
            .clone();
        current = next;
    }
    if !current.has_endpoint(theta) {
        return Err(Error::NoRayPair(theta.to_string()));
    }
    Ok(current)
}

/// The other angle of the ray pair containing `theta`.
pub fn conjugate_angle<T: AngleInt>(theta: &BinaryAngle<T>) -> Result<BinaryAngle<T>> {
    let pair = ray_pair_of(theta)?;
    Ok(if pair.lower == *theta {
        pair.upper
    } else {
        pair.lower
    })
}

/// A component in a subwake not hidden behind a pair of lower period.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "T: AngleInt", deserialize = "T: AngleInt"))]
pub struct VisibleComponent<T: AngleInt> {
    pub component: HyperbolicComponent<T>,
    /// Narrowness predicted from the kneading sequence of the base component.
    pub narrow: bool,
    /// The period of the innermost visible component whose wake contains
    /// this one.
    pub enclosing_period: Option<usize>,
}

/// The components visible from the narrow component rooted at `w` inside
/// its `angle`-subwake, by increasing period.
pub fn visible_components<T: AngleInt>(w: &RayPair<T>, angle: InternalAngle) -> Result<Vec<VisibleComponent<T>>> {
    let q = angle.denominator as usize;
    let tree = ComponentTree::within(w, q * w.period);
    visible_in_tree(&tree, 0, angle)
}

/// As [`visible_components`], reading pairs from a tree that reaches period
/// `q · n` inside the wake of node `w`.
pub fn visible_in_tree<T: AngleInt>(
    tree: &ComponentTree<T>,
    w: usize,
    angle: InternalAngle,
) -> Result<Vec<VisibleComponent<T>>> {
    let base = tree.component(w)?;
    let n = base.period();
    if !base.is_narrow() {
        return Err(Error::NotNarrow(n));
    }
    let q = angle.denominator as usize;
    if tree.max_period() < q * n {
        return Err(Error::InvalidArgument(format!(
            "tree reaches period {}, the subwake needs {}",
            tree.max_period(),
            q * n
        )));
    }
    let satellite = satellite_child(tree, w, &base, angle)?;
    let nu = kneading_of_address(&base.internal_address)?;
    let mut visible: Vec<(usize, VisibleComponent<T>)> = Vec::new();
    for v in tree.subtree(satellite) {
        let period = tree.node(v).pair.period;
        let chain: Vec<usize> = tree.ancestors(v).into_iter().take_while(|&a| a != w).collect();
        if chain.iter().any(|&a| tree.node(a).pair.period < period) {
            continue;
        }
        let enclosing_period = chain
            .iter()
            .map(|&a| tree.node(a).pair.period)
            .next()
            .filter(|_| v != satellite);
        let k = (period - n - 1) % n + 1;
        let hidden = (1..k)
            .map(|r| rho(&nu, r))
            .collect::<Result<Vec<_>>>()?
            .contains(&Rho::Finite(k));
        visible.push((
            v,
            VisibleComponent {
                component: tree.component(v)?,
                narrow: !hidden,
                enclosing_period,
            },
        ));
    }
    // the innermost enclosing node may itself be hidden; use visible nodes only
    let visible_ids: Vec<usize> = visible.iter().map(|(v, _)| *v).collect();
    for (v, vc) in visible.iter_mut() {
        vc.enclosing_period = tree
            .ancestors(*v)
            .into_iter()
            .take_while(|&a| a != w)
            .find(|a| visible_ids.contains(a))
            .map(|a| tree.node(a).pair.period);
    }
    let mut out: Vec<VisibleComponent<T>> = visible.into_iter().map(|(_, vc)| vc).collect();
    out.sort_by_key(|vc| vc.component.period());
    Ok(out)
}

/// The child of `w` bifurcating at internal angle `angle`.
fn satellite_child<T: AngleInt>(
    tree: &ComponentTree<T>,
    w: usize,
    base: &HyperbolicComponent<T>,
    angle: InternalAngle,
) -> Result<usize> {
    let n = base.period();
    let target_period = angle.denominator as usize * n;
    let mut items = base.angled_address.items().to_vec();
    items.last_mut().expect("nonempty").angle = Some(angle);
    items.push(AngledEntry {
        period: target_period,
        angle: None,
    });
    let expected = AngledInternalAddress::new(items, false)?;
    for &c in &tree.node(w).children {
        let pair = &tree.node(c).pair;
        if pair.period == target_period && angled_address_of_angle(&pair.lower, target_period)? == expected {
            return Ok(c);
        }
    }
    Err(Error::NoRayPair(format!("{angle}-subwake of {}", base.root)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Angle, Angle64};

    fn a(n: u64, d: u64) -> Angle64 {
        Angle64::from_u64(n, d).unwrap()
    }

    fn pair(x: (u64, u64), y: (u64, u64)) -> RayPair<u64> {
        RayPair::new(a(x.0, x.1), a(y.0, y.1)).unwrap()
    }

    fn texts(pairs: &[RayPair<u64>]) -> Vec<String> {
        pairs.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn small_pairings() {
        assert_eq!(texts(&lavaurs_pairs(2)), vec!["(1/3, 2/3)"]);
        assert_eq!(
            texts(&lavaurs_pairs(3)),
            vec!["(1/3, 2/3)", "(1/7, 2/7)", "(3/7, 4/7)", "(5/7, 6/7)"]
        );
        let four = texts(&lavaurs_pairs::<u64>(4));
        assert_eq!(
            four[4..],
            ["(1/15, 2/15)", "(1/5, 4/15)", "(2/5, 3/5)", "(7/15, 8/15)", "(11/15, 4/5)", "(13/15, 14/15)"]
        );
        assert!(lavaurs_pairs::<u64>(1).is_empty());
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_angle(&a(4, 15)).unwrap(), a(1, 5));
        assert_eq!(conjugate_angle(&a(1, 3)).unwrap(), a(2, 3));
        assert_eq!(conjugate_angle(&a(3, 7)).unwrap(), a(4, 7));
        assert_eq!(conjugate_angle(&a(2, 5)).unwrap(), a(3, 5));
        assert_eq!(conjugate_angle(&Angle64::zero()), Err(Error::SeedAngle));
        assert!(conjugate_angle(&a(1, 6)).is_err());
    }

    #[test]
    fn conjugates_match_pairing() {
        for p in lavaurs_pairs::<u64>(9) {
            assert_eq!(conjugate_angle(p.lower()).unwrap(), *p.upper());
            assert_eq!(conjugate_angle(p.upper()).unwrap(), *p.lower());
        }
    }

    #[test]
    fn widths() {
        let one = Ratio::<u64>::one();
        assert_eq!(subwake_width(&one, 1, 3), Ratio::new(1, 7));
        assert_eq!(subwake_width(&one, 1, 2), Ratio::new(1, 3));
        assert_eq!(subwake_width(&Ratio::new(1u64, 7), 3, 2), Ratio::new(1, 9));
        assert_eq!(pair((1, 7), (2, 7)).width(), Ratio::new(1, 7));
        assert_eq!(RayPair::<u64>::seed().width(), one);
    }

    #[test]
    fn subwake_widths_match_satellites() {
        let tree = ComponentTree::<u64>::new(12);
        for (i, node) in tree.nodes().iter().enumerate() {
            let n = node.pair.period();
            for &c in &node.children {
                let child = &tree.node(c).pair;
                if child.period().is_multiple_of(n) && child.period() > n {
                    let q = child.period() / n;
                    let comp = tree.component(c).unwrap();
                    // bifurcations from node i have its address extended by q·n
                    let parent_addr = tree.component(i).unwrap().internal_address;
                    let mut ext = parent_addr.entries().to_vec();
                    ext.push(child.period());
                    if comp.internal_address.entries() == ext.as_slice() {
                        assert_eq!(child.width(), subwake_width(&node.pair.width(), n, q), "{child}");
                    }
                }
            }
        }
    }

    #[test]
    fn narrowness_examples() {
        assert!(pair((1, 7), (2, 7)).is_narrow());
        assert!(pair((3, 7), (4, 7)).is_narrow());
        let six = conjugate_angle(&a(22, 63)).unwrap();
        let p = RayPair::new(a(22, 63), six).unwrap();
        assert_eq!(p.to_string(), "(22/63, 25/63)");
        assert_eq!(HyperbolicComponent::from_pair(p.clone()).unwrap().angled_address.to_string(), "1[1/2]-2[1/3]-6");
        assert!(!p.is_narrow());
        let period_four = pair((2, 5), (3, 5));
        assert!(!period_four.is_narrow());
        assert!(RayPair::<u64>::seed().is_narrow());
    }

    #[test]
    fn tree_shapes() {
        let t1 = ComponentTree::<u64>::new(1);
        assert_eq!(t1.len(), 1);
        assert_eq!(t1.root().width(), Ratio::one());
        let t3 = ComponentTree::<u64>::new(3);
        assert_eq!(t3.len(), 5);
        let parent = |x: (u64, u64)| {
            let i = t3.find_angle(&a(x.0, x.1)).unwrap();
            t3.node(i).parent.map(|p| t3.node(p).pair.to_string())
        };
        assert_eq!(parent((1, 7)).as_deref(), Some("(0/1, 1/1)"));
        assert_eq!(parent((5, 7)).as_deref(), Some("(0/1, 1/1)"));
        assert_eq!(parent((3, 7)).as_deref(), Some("(1/3, 2/3)"));
        assert_eq!(ComponentTree::<u64>::new(4).len(), 11);
        let t4 = ComponentTree::<u64>::new(4);
        let i = t4.find_angle(&a(3, 7)).unwrap();
        assert_eq!(t4.node(t4.node(i).parent.unwrap()).pair.to_string(), "(2/5, 3/5)");
    }

    #[test]
    fn containment() {
        let c = |x, y| HyperbolicComponent::from_pair(pair(x, y)).unwrap();
        assert!(wake_contains(&c((1, 3), (2, 3)), &c((3, 7), (4, 7))));
        assert!(!wake_contains(&c((1, 3), (2, 3)), &c((1, 7), (2, 7))));
        let w = c((1, 3), (2, 3));
        assert!(!wake_contains(&w, &w));
    }

    #[test]
    fn visible_examples() {
        let periods = |w: RayPair<u64>, p, q| -> Vec<(usize, bool)> {
            visible_components(&w, InternalAngle::new(p, q).unwrap())
                .unwrap()
                .iter()
                .map(|v| (v.component.period(), v.narrow))
                .collect()
        };
        let main = RayPair::<u64>::seed();
        assert_eq!(periods(main.clone(), 1, 3), vec![(3, true)]);
        let vis = visible_components(&main, InternalAngle::new(1, 3).unwrap()).unwrap();
        assert_eq!(vis[0].component.root, pair((1, 7), (2, 7)));
        let two = pair((1, 3), (2, 3));
        assert_eq!(periods(two.clone(), 1, 3), vec![(5, true), (6, false)]);
        assert_eq!(periods(two.clone(), 1, 2), vec![(3, true), (4, false)]);
        let four = pair((2, 5), (3, 5));
        assert_eq!(
            visible_components(&four, InternalAngle::new(1, 2).unwrap()).unwrap_err(),
            Error::NotNarrow(4)
        );
    }

    #[test]
    fn json_forms() {
        let p = pair((1, 5), (4, 15));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"lower":"1/5","upper":"4/15","period":4}"#);
        assert_eq!(serde_json::from_str::<RayPair<u64>>(&json).unwrap(), p);
        let seed = serde_json::to_string(&RayPair::<u64>::seed()).unwrap();
        assert_eq!(seed, r#"{"lower":"0/1","upper":"1/1","period":1}"#);
        assert!(serde_json::from_str::<RayPair<u64>>(&seed).unwrap().is_seed());
    }

    #[test]
    fn big_and_small_backings_agree() {
        let small: Vec<String> = lavaurs_pairs::<u64>(8).iter().map(|p| p.to_string()).collect();
        let big: Vec<String> = lavaurs_pairs::<num_bigint::BigUint>(8).iter().map(|p| p.to_string()).collect();
        assert_eq!(small, big);
        let _ = Angle::zero();
    }
}
