//! Order relations, their equivalence patterns, cores, widths, and the exact
//! path-existence thresholds they induce.
//!
//! An order relation of length `k` is a map `t` on a strictly increasing
//! domain of `k` naturals with `t(a) > a` pointwise. Its relabeling class is
//! captured by [`Pattern`]; the sub-map landing back inside the domain is the
//! [`CoreMap`], whose width drives every vertex threshold.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{rational, Rational, RationalParts};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RelationError {
    #[error("domain must be strictly increasing")]
    NotIncreasing,
    #[error("image {image} at index {index} does not exceed its point {point}")]
    NotProgressive {
        index: usize,
        point: u64,
        image: u64,
    },
    #[error("duplicate image value {0}")]
    ImageCollision(u64),
    #[error("relations have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("class enumeration supports lengths 1..={1}, got {0}")]
    TooLarge(usize, usize),
    #[error("self-map contains a cycle")]
    CycleDetected,
    #[error("relation family is empty")]
    EmptyFamily,
    #[error("bad arity: {0}")]
    BadArity(String),
    #[error("degenerate threshold: lambda_G = 1")]
    DegenerateThreshold,
}

/// Maximum length accepted by [`RelationSet::enumerate_classes`].
pub const MAX_ENUMERATION_LENGTH: usize = 6;

// ---------------------------------------------------------------------------
// OrderRelation
// ---------------------------------------------------------------------------

/// A validated order relation: `images[i] = t(domain[i])` with
/// `images[i] > domain[i]` and pairwise distinct images.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrderRelation {
    domain: Vec<u64>,
    images: Vec<u64>,
}

impl OrderRelation {
    /// Validate a raw domain/images pair.
    pub fn new(domain: Vec<u64>, images: Vec<u64>) -> Result<Self, RelationError> {
        if !domain.windows(2).all(|w| w[0] < w[1]) {
            return Err(RelationError::NotIncreasing);
        }
        if domain.len() != images.len() {
            return Err(RelationError::LengthMismatch(domain.len(), images.len()));
        }
        let mut seen = BTreeSet::new();
        for &image in &images {
            if !seen.insert(image) {
                return Err(RelationError::ImageCollision(image));
            }
        }
        for (index, (&point, &image)) in domain.iter().zip(&images).enumerate() {
            if image <= point {
                return Err(RelationError::NotProgressive {
                    index,
                    point,
                    image,
                });
            }
        }
        Ok(Self { domain, images })
    }

    /// The shift relation of length `k`: `i -> i+1` on `{1, ..., k}`.
    pub fn shift(k: usize) -> Self {
        let domain = (1..=k as u64).collect();
        let images = (2..=k as u64 + 1).collect();
        Self { domain, images }
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn domain(&self) -> &[u64] {
        &self.domain
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn sorted_images(&self) -> Vec<u64> {
        let mut v = self.images.clone();
        v.sort_unstable();
        v
    }

    /// The relation as a partial self-map `domain -> N`.
    pub fn self_map(&self) -> BTreeMap<u64, u64> {
        self.domain
            .iter()
            .copied()
            .zip(self.images.iter().copied())
            .collect()
    }

    /// Relabeling-invariant canonical pattern; complete equivalence invariant.
    pub fn pattern(&self) -> Pattern {
        let mut points: Vec<u64> = self.domain.iter().chain(&self.images).copied().collect();
        points.sort_unstable();
        points.dedup();
        let position = |value: u64| points.binary_search(&value).expect("member point");
        let mut roles = vec![PointRole::Domain; points.len()];
        let mut is_domain = vec![false; points.len()];
        for &d in &self.domain {
            is_domain[position(d)] = true;
        }
        for (source, &image) in self.images.iter().enumerate() {
            let p = position(image);
            roles[p] = if is_domain[p] {
                PointRole::Both { source }
            } else {
                PointRole::Image { source }
            };
        }
        for (p, role) in roles.iter_mut().enumerate() {
            if let PointRole::Domain = role {
                debug_assert!(is_domain[p], "every merged point carries a role");
            }
        }
        Pattern { roles }
    }

    /// Role sequence of the (tail, head) tuple pair, forgetting which source
    /// maps to which image. Two relations with equal pair patterns define the
    /// same edge set.
    pub fn pair_pattern(&self) -> PairPattern {
        pair_pattern_of(&self.domain, &self.sorted_images())
    }

    /// Restriction of the relation to the sources whose image stays in the
    /// domain.
    pub fn core(&self) -> CoreMap {
        let domain_set: BTreeSet<u64> = self.domain.iter().copied().collect();
        let mut domain = Vec::new();
        let mut images = Vec::new();
        for (&source, &image) in self.domain.iter().zip(&self.images) {
            if domain_set.contains(&image) {
                domain.push(source);
                images.push(image);
            }
        }
        CoreMap { domain, images }
    }

    /// Width of the full relation seen as a self-map on its domain.
    pub fn width(&self) -> u64 {
        map_width(&self.self_map()).expect("order relations cannot cycle")
    }

    pub fn is_shift_pattern(&self) -> bool {
        !self.is_empty() && self.pattern() == Self::shift(self.len()).pattern()
    }
}

impl<'de> Deserialize<'de> for OrderRelation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            domain: Vec<u64>,
            images: Vec<u64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        OrderRelation::new(raw.domain, raw.images).map_err(D::Error::custom)
    }
}

/// Role a merged point plays in a relation pattern. `source` is the index of
/// the domain point mapping onto it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointRole {
    Domain,
    Image { source: usize },
    Both { source: usize },
}

/// Canonical pattern of an order relation: the roles of the merged points of
/// `domain` and `images` listed in increasing order. Invariant under every
/// strictly increasing relabeling of the naturals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    roles: Vec<PointRole>,
}

impl Pattern {
    /// Number of distinct merged points (at most `2k`).
    pub fn size(&self) -> usize {
        self.roles.len()
    }

    pub fn roles(&self) -> &[PointRole] {
        &self.roles
    }

    /// The representative relation whose points are `0..size`.
    pub fn canonical_relation(&self) -> OrderRelation {
        let mut domain = Vec::new();
        let mut image_of = BTreeMap::new();
        for (pos, role) in self.roles.iter().enumerate() {
            match *role {
                PointRole::Domain => domain.push(pos as u64),
                PointRole::Image { source } => {
                    image_of.insert(source, pos as u64);
                }
                PointRole::Both { source } => {
                    domain.push(pos as u64);
                    image_of.insert(source, pos as u64);
                }
            }
        }
        let images = (0..domain.len()).map(|i| image_of[&i]).collect();
        OrderRelation::new(domain, images).expect("patterns encode valid relations")
    }
}

/// Role of a merged point in an ordered pair of increasing tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairRole {
    Tail,
    Head,
    Shared,
}

/// Merged-order roles of a (tail, head) pair of increasing tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairPattern {
    roles: Vec<PairRole>,
}

impl PairPattern {
    pub fn roles(&self) -> &[PairRole] {
        &self.roles
    }
}

/// The pair pattern of two strictly increasing tuples of equal length.
pub fn pair_pattern_of(tail: &[u64], head: &[u64]) -> PairPattern {
    debug_assert!(tail.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(head.windows(2).all(|w| w[0] < w[1]));
    let mut points: Vec<u64> = tail.iter().chain(head).copied().collect();
    points.sort_unstable();
    points.dedup();
    let roles = points
        .iter()
        .map(|p| {
            let in_tail = tail.binary_search(p).is_ok();
            let in_head = head.binary_search(p).is_ok();
            match (in_tail, in_head) {
                (true, true) => PairRole::Shared,
                (true, false) => PairRole::Tail,
                (false, true) => PairRole::Head,
                (false, false) => unreachable!("merged point from neither tuple"),
            }
        })
        .collect();
    PairPattern { roles }
}

/// True iff both relations have the same canonical pattern.
pub fn equivalent(a: &OrderRelation, b: &OrderRelation) -> Result<bool, RelationError> {
    if a.len() != b.len() {
        return Err(RelationError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.pattern() == b.pattern())
}

// ---------------------------------------------------------------------------
// RelationSet
// ---------------------------------------------------------------------------

/// A finite set of order relations of common length with pairwise distinct
/// patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    k: usize,
    relations: Vec<OrderRelation>,
    normalized: bool,
}

impl RelationSet {
    /// Build a set, deduplicating by pattern. All members must share a length.
    pub fn new(relations: Vec<OrderRelation>) -> Result<Self, RelationError> {
        let Some(first) = relations.first() else {
            return Err(RelationError::EmptyFamily);
        };
        let k = first.len();
        let mut seen = BTreeSet::new();
        let mut members = Vec::new();
        for rel in relations {
            if rel.len() != k {
                return Err(RelationError::LengthMismatch(k, rel.len()));
            }
            if seen.insert(rel.pattern()) {
                members.push(rel);
            }
        }
        let normalized = members.iter().all(|r| r.domain() == members[0].domain());
        Ok(Self {
            k,
            relations: members,
            normalized,
        })
    }

    /// One canonical representative per equivalence class of length `k`.
    pub fn enumerate_classes(k: usize) -> Result<Self, RelationError> {
        if k == 0 {
            return Err(RelationError::BadArity(
                "class enumeration needs k >= 1".into(),
            ));
        }
        if k > MAX_ENUMERATION_LENGTH {
            return Err(RelationError::TooLarge(k, MAX_ENUMERATION_LENGTH));
        }
        let mut patterns = Vec::new();
        for size in k..=2 * k {
            for_each_combination(size, k, |domain_positions| {
                let in_domain: Vec<bool> = {
                    let mut v = vec![false; size];
                    for &p in domain_positions {
                        v[p] = true;
                    }
                    v
                };
                let mandatory: Vec<usize> = (0..size).filter(|&p| !in_domain[p]).collect();
                let extra_needed = k - mandatory.len();
                for_each_combination(domain_positions.len(), extra_needed, |extra_idx| {
                    let mut image_positions = mandatory.clone();
                    image_positions.extend(extra_idx.iter().map(|&i| domain_positions[i]));
                    image_positions.sort_unstable();
                    let mut assignment = vec![usize::MAX; k];
                    let mut used = vec![false; image_positions.len()];
                    assign_sources(
                        0,
                        domain_positions,
                        &image_positions,
                        &mut used,
                        &mut assignment,
                        &mut |assignment| {
                            patterns.push(pattern_from_parts(size, domain_positions, assignment));
                        },
                    );
                });
            });
        }
        patterns.sort();
        patterns.dedup();
        debug_assert!(patterns.windows(2).all(|w| w[0] != w[1]));
        let relations: Vec<OrderRelation> =
            patterns.iter().map(Pattern::canonical_relation).collect();
        Ok(Self {
            k,
            relations,
            normalized: false,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn members(&self) -> &[OrderRelation] {
        &self.relations
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Relabel every member onto the common domain `{0, k+1, 2(k+1), ...}`.
    ///
    /// The stride leaves `k` free slots between consecutive domain points, so
    /// any interleaving of image-only points fits. Patterns are unchanged.
    pub fn normalize(&self) -> RelationSet {
        let stride = self.k as u64 + 1;
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                let pattern = rel.pattern();
                let mut domain = Vec::with_capacity(self.k);
                let mut value_of = vec![0u64; pattern.size()];
                // Domain points take strided values; image-only points are
                // packed into the gap after the preceding domain point.
                let mut domain_seen = 0u64;
                let mut gap_used = 0u64;
                for (pos, role) in pattern.roles().iter().enumerate() {
                    let is_domain = matches!(role, PointRole::Domain | PointRole::Both { .. });
                    if is_domain {
                        let v = domain_seen * stride;
                        value_of[pos] = v;
                        domain.push(v);
                        domain_seen += 1;
                        gap_used = 0;
                    } else {
                        debug_assert!(domain_seen > 0, "no image precedes the first domain point");
                        gap_used += 1;
                        debug_assert!(gap_used <= self.k as u64);
                        value_of[pos] = (domain_seen - 1) * stride + gap_used;
                    }
                }
                let mut images = vec![0u64; self.k];
                for (pos, role) in pattern.roles().iter().enumerate() {
                    match *role {
                        PointRole::Image { source } | PointRole::Both { source } => {
                            images[source] = value_of[pos];
                        }
                        PointRole::Domain => {}
                    }
                }
                OrderRelation::new(domain, images).expect("normalization preserves validity")
            })
            .collect();
        RelationSet {
            k: self.k,
            relations,
            normalized: true,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "k": self.k, "relations": self.relations })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, serde_json::Error> {
        #[derive(Deserialize)]
        struct Raw {
            k: usize,
            relations: Vec<OrderRelation>,
        }
        let raw: Raw = serde_json::from_value(value.clone())?;
        let set = RelationSet::new(raw.relations)
            .map_err(|e| serde_json::Error::custom(e.to_string()))?;
        if set.k != raw.k {
            return Err(serde_json::Error::custom(format!(
                "declared k = {} but relations have length {}",
                raw.k, set.k
            )));
        }
        Ok(set)
    }
}

fn pattern_from_parts(size: usize, domain_positions: &[usize], assignment: &[usize]) -> Pattern {
    let mut roles = vec![PointRole::Domain; size];
    let mut is_domain = vec![false; size];
    for &p in domain_positions {
        is_domain[p] = true;
    }
    for (source, &pos) in assignment.iter().enumerate() {
        roles[pos] = if is_domain[pos] {
            PointRole::Both { source }
        } else {
            PointRole::Image { source }
        };
    }
    Pattern { roles }
}

fn assign_sources(
    source: usize,
    domain_positions: &[usize],
    image_positions: &[usize],
    used: &mut [bool],
    assignment: &mut [usize],
    emit: &mut impl FnMut(&[usize]),
) {
    if source == domain_positions.len() {
        emit(assignment);
        return;
    }
    for (i, &pos) in image_positions.iter().enumerate() {
        if !used[i] && pos > domain_positions[source] {
            used[i] = true;
            assignment[source] = pos;
            assign_sources(
                source + 1,
                domain_positions,
                image_positions,
                used,
                assignment,
                emit,
            );
            used[i] = false;
        }
    }
}

/// Visit every k-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance odometer
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// ---------------------------------------------------------------------------
// CoreMap and width
// ---------------------------------------------------------------------------

/// The restriction of a relation to sources whose image stays inside the
/// domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreMap {
    domain: Vec<u64>,
    images: Vec<u64>,
}

impl CoreMap {
    pub fn domain(&self) -> &[u64] {
        &self.domain
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn as_map(&self) -> BTreeMap<u64, u64> {
        self.domain
            .iter()
            .copied()
            .zip(self.images.iter().copied())
            .collect()
    }

    pub fn width(&self) -> u64 {
        map_width(&self.as_map()).expect("cores of valid relations cannot cycle")
    }
}

/// Width of a partial self-map with finite domain: one plus the longest run
/// of iterates that stays inside the domain. `1` for the empty map, `>= 2`
/// otherwise.
pub fn map_width(map: &BTreeMap<u64, u64>) -> Result<u64, RelationError> {
    if map.is_empty() {
        return Ok(1);
    }
    let size = map.len() as u64;
    let mut longest = 1u64;
    for &start in map.keys() {
        let mut run = 1u64;
        let mut current = start;
        while let Some(&next) = map.get(&current) {
            if !map.contains_key(&next) {
                break;
            }
            run += 1;
            if run > size {
                return Err(RelationError::CycleDetected);
            }
            current = next;
        }
        longest = longest.max(run);
    }
    Ok(1 + longest)
}

// ---------------------------------------------------------------------------
// Threshold reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdKind {
    Vertex,
    Edge,
    Family,
    FinitePath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdValue {
    Exact(Rational),
    Interval { lo: Rational, hi: Rational },
}

/// An exact threshold (or certified interval) together with its origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub kind: ThresholdKind,
    pub value: ThresholdValue,
    /// The width `w` behind a point value; absent for intervals.
    pub width: Option<u64>,
    /// Human-readable description of the formula that produced the value.
    pub provenance: String,
}

impl ThresholdReport {
    pub fn exact(&self) -> Option<Rational> {
        match self.value {
            ThresholdValue::Exact(r) => Some(r),
            ThresholdValue::Interval { lo, hi } if lo == hi => Some(lo),
            _ => None,
        }
    }

    pub fn bounds(&self) -> (Rational, Rational) {
        match self.value {
            ThresholdValue::Exact(r) => (r, r),
            ThresholdValue::Interval { lo, hi } => (lo, hi),
        }
    }
}

impl Serialize for ThresholdReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("kind", &self.kind)?;
        match self.value {
            ThresholdValue::Exact(r) => {
                map.serialize_entry("num", r.numer())?;
                map.serialize_entry("den", r.denom())?;
            }
            ThresholdValue::Interval { lo, hi } => {
                map.serialize_entry("lo", &RationalParts::from(lo))?;
                map.serialize_entry("hi", &RationalParts::from(hi))?;
            }
        }
        if let Some(w) = self.width {
            map.serialize_entry("w", &w)?;
        }
        map.end()
    }
}

fn width_threshold(width: u64) -> Rational {
    rational(width as i64 - 1, width as i64)
}

/// Vertex-probability threshold `1 - 1/w(core)`.
pub fn vertex_threshold(rel: &OrderRelation) -> ThresholdReport {
    let width = rel.core().width();
    ThresholdReport {
        kind: ThresholdKind::Vertex,
        value: ThresholdValue::Exact(width_threshold(width)),
        width: Some(width),
        provenance: "1 - 1/w over the core self-map".into(),
    }
}

/// Edge-probability threshold `1 - 1/w` of the full relation self-map.
pub fn edge_threshold(rel: &OrderRelation) -> ThresholdReport {
    let width = rel.width();
    ThresholdReport {
        kind: ThresholdKind::Edge,
        value: ThresholdValue::Exact(width_threshold(width)),
        width: Some(width),
        provenance: "1 - 1/w over the full relation self-map".into(),
    }
}

/// Certified bounds for the threshold of a relation family.
///
/// The upper bound is the minimum of the member vertex thresholds (more edge
/// types only make long paths easier). The lower bound is the best value
/// achieved by an exhaustive (or, beyond budget, heuristic) search over
/// pattern-table colorings that must defeat every member's core constraint
/// simultaneously; it is exact for the colorings searched, hence a certified
/// lower bound. Singleton families collapse to the vertex threshold.
pub fn family_threshold_bounds(set: &RelationSet) -> Result<ThresholdReport, RelationError> {
    if set.is_empty() {
        return Err(RelationError::EmptyFamily);
    }
    if set.len() == 1 {
        let vertex = vertex_threshold(&set.members()[0]);
        let value = vertex.exact().expect("vertex thresholds are exact");
        return Ok(ThresholdReport {
            kind: ThresholdKind::Family,
            value: ThresholdValue::Interval {
                lo: value,
                hi: value,
            },
            width: vertex.width,
            provenance: "singleton family: vertex threshold".into(),
        });
    }
    let normalized = if set.is_normalized() {
        set.clone()
    } else {
        set.normalize()
    };
    let hi = normalized
        .members()
        .iter()
        .map(|rel| vertex_threshold(rel).exact().expect("exact"))
        .min()
        .expect("nonempty");
    let lo = crate::pattern_oracle::family_table_search(&normalized);
    debug_assert!(
        lo <= hi,
        "joint search value must stay below the member minimum"
    );
    Ok(ThresholdReport {
        kind: ThresholdKind::Family,
        value: ThresholdValue::Interval { lo: lo.min(hi), hi },
        width: None,
        provenance: "min member vertex threshold / joint pattern-table search".into(),
    })
}

/// Exact lower/upper bounds for the threshold of length-`p` paths in the
/// shift graph on `k`-tuples; the bounds agree iff `p` divides `k - 1`.
pub fn finite_path_bounds(p: u64, k: u64) -> Result<ThresholdReport, RelationError> {
    if k < 2 {
        return Err(RelationError::BadArity(format!(
            "finite-path bounds need k >= 2, got {k}"
        )));
    }
    if p < 1 {
        return Err(RelationError::BadArity(
            "finite-path bounds need p >= 1".into(),
        ));
    }
    let m = k - 1;
    let ceil = m.div_ceil(p) as i64;
    let floor = (m / p) as i64;
    let m = m as i64;
    let k = k as i64;
    let lo = (rational(1, 1) - rational(ceil, m)) * rational(m, k);
    let hi = (rational(1, 1) - rational(floor, m)) * rational(m, k);
    Ok(ThresholdReport {
        kind: ThresholdKind::FinitePath,
        value: ThresholdValue::Interval { lo, hi },
        width: None,
        provenance: "window coloring bound (floor/ceil of (k-1)/p)".into(),
    })
}

/// Lower bound for the probability of a long path when every vertex
/// probability is at least `lambda` and the graph threshold is `lambda_g`.
pub fn infinite_path_probability_bound(
    lambda: Rational,
    lambda_g: Rational,
) -> Result<Rational, RelationError> {
    let one = rational(1, 1);
    if lambda_g >= one {
        return Err(RelationError::DegenerateThreshold);
    }
    debug_assert!(lambda >= rational(0, 1) && lambda <= one);
    debug_assert!(lambda_g >= rational(0, 1));
    let bound = (lambda - lambda_g) / (one - lambda_g);
    Ok(bound.max(rational(0, 1)))
}
