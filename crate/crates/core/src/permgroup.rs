//! Finite permutation groups, materialized element by element.
//!
//! Permutations act on the right: `x·p` is `p.image(x)`, and the product
//! `p * q` means "apply `p`, then `q`", so that `x·(pq) = (x·p)·q`. Every
//! group records, for each element, a word in its generators reaching it;
//! homomorphisms given on generators are evaluated through those words.
//!
//! Element lists are kept sorted by image array, so every derived object
//! (cosets, subgroup lists, quotient labels) comes out in a reproducible
//! order.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_ELEMENT_CAP: usize = 100_000;

/// Largest group for which subgroup lattices are computed.
pub const LATTICE_CAP: usize = 2048;

/// Largest group order handed to the brute-force isomorphism search.
pub const ISOMORPHISM_CAP: usize = 200;

static ELEMENT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_ELEMENT_CAP);

pub fn element_cap() -> usize {
    ELEMENT_CAP.load(Ordering::Relaxed)
}

/// Overrides the closure cap for every subsequent `generate` call.
pub fn set_element_cap(cap: usize) {
    ELEMENT_CAP.store(cap.max(1), Ordering::Relaxed);
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Builds a permutation from disjoint cycles. Points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if touched[x] {
                    return Err(Error::NotAPermutation(format!("point {x} appears twice in {cycles:?}")));
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    /// Parses disjoint-cycle notation such as `(0 1 2)(3 4)`; `()` and `id`
    /// denote the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "id" || text == "()" {
            return Ok(Permutation::identity(degree));
        }
        let bad = || Error::NotAPermutation(format!("cannot parse cycle notation {text:?}"));
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = open.find(')').ok_or_else(bad)?;
            let body = &open[..close];
            let cycle = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self` followed by `other`. Panics on degree mismatch; see [`compose`]
    /// for the checked form.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.then(other) == other.then(self)
    }

    /// Non-trivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let fixed = self.images.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count();
        let mut ty: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        ty.extend(std::iter::repeat_n(1, fixed));
        ty.sort_unstable_by(|a, b| b.cmp(a));
        ty
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().map(Vec::len).fold(1, lcm)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

/// Degree-less parse: the degree is one past the largest point mentioned.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let degree = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .map_or(1, |m| m + 1);
        Permutation::parse_cycles(s, degree)
    }
}

/// "Apply `p`, then `q`": `result.image(x) = q.image(p.image(x))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    Ok(p.then(q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

pub type Word = Vec<Letter>;

/// A finitely generated permutation group with all elements materialized.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    words: Vec<Word>,
    index: HashMap<Permutation, usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Equality is equality of element sets.
impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        let id = Permutation::identity(degree);
        PermGroup {
            degree,
            generators: Vec::new(),
            index: HashMap::from([(id.clone(), 0)]),
            elements: vec![id],
            words: vec![Vec::new()],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements sorted by image array; the identity is always first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn word(&self, p: &Permutation) -> Option<&Word> {
        self.index_of(p).map(|i| &self.words[i])
    }

    pub fn word_at(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Every element of `self` lies in `other`; otherwise the first that does not.
    pub fn subgroup_witness(&self, other: &PermGroup) -> Option<&Permutation> {
        self.elements.iter().find(|p| !other.contains(p))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.subgroup_witness(other).is_none()
    }

    /// Evaluates a word in this group's generators with the given images.
    pub fn evaluate_word(word: &Word, images: &[Permutation], degree: usize) -> Permutation {
        let mut acc = Permutation::identity(degree);
        for letter in word {
            let g = &images[letter.generator];
            acc = if letter.inverse {
                acc.then(&g.inverse())
            } else {
                acc.then(g)
            };
        }
        acc
    }

    /// Builds a group from a set already known to be closed under products,
    /// choosing a small generating set greedily.
    pub fn from_closed_set(degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        let mut generators: Vec<Permutation> = Vec::new();
        let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
        for p in &elements {
            if !span.contains(p) {
                generators.push(p.clone());
                span = closure_set(degree, &generators);
            }
        }
        let group = generate_unchecked(degree, generators, usize::MAX).expect("uncapped closure cannot fail");
        debug_assert_eq!(group.elements, elements, "input set was not closed");
        group
    }
}

fn closure_set(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in gens {
            let next = e.then(g);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

fn generate_unchecked(degree: usize, gens: Vec<Permutation>, cap: usize) -> Result<PermGroup> {
    let inverses: Vec<Permutation> = gens.iter().map(Permutation::inverse).collect();
    let id = Permutation::identity(degree);
    let mut found: Vec<(Permutation, Word)> = vec![(id.clone(), Vec::new())];
    let mut seen: HashMap<Permutation, usize> = HashMap::from([(id, 0)]);
    let mut head = 0;
    while head < found.len() {
        let (e, word) = found[head].clone();
        head += 1;
        for (i, g) in gens.iter().enumerate() {
            for (inverse, step) in [(false, g), (true, &inverses[i])] {
                let next = e.then(step);
                if seen.contains_key(&next) {
                    continue;
                }
                if found.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                let mut w = word.clone();
                w.push(Letter { generator: i, inverse });
                seen.insert(next.clone(), found.len());
                found.push((next, w));
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let index = found.iter().enumerate().map(|(i, (p, _))| (p.clone(), i)).collect();
    let (elements, words) = found.into_iter().unzip();
    Ok(PermGroup {
        degree,
        generators: gens,
        elements,
        words,
        index,
    })
}

/// Breadth-first closure of `gens` under products with generators and their
/// inverses, capped at [`element_cap`].
pub fn generate(degree: usize, gens: &[Permutation]) -> Result<PermGroup> {
    generate_with_cap(degree, gens, element_cap())
}

pub fn generate_with_cap(degree: usize, gens: &[Permutation], cap: usize) -> Result<PermGroup> {
    if degree == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: g.degree(),
        });
    }
    generate_unchecked(degree, gens.to_vec(), cap)
}

fn check_point(point: usize, degree: usize) -> Result<()> {
    if point >= degree {
        return Err(Error::PointOutOfRange { point, degree });
    }
    Ok(())
}

/// `{ point·g : g ∈ G }`, sorted, found by breadth-first search over generators.
pub fn orbit(point: usize, group: &PermGroup) -> Result<Vec<usize>> {
    check_point(point, group.degree)?;
    let mut seen = vec![false; group.degree];
    seen[point] = true;
    let mut queue = VecDeque::from([point]);
    while let Some(x) = queue.pop_front() {
        for g in &group.generators {
            let y = g.image(x);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok((0..group.degree).filter(|&x| seen[x]).collect())
}

/// The orbit partition of all points, blocks ordered by least element.
pub fn orbits(group: &PermGroup) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; group.degree];
    let mut out = Vec::new();
    for p in 0..group.degree {
        if assigned[p] {
            continue;
        }
        let block = orbit(p, group).expect("point in range");
        for &x in &block {
            assigned[x] = true;
        }
        out.push(block);
    }
    out
}

fn subgroup_where(group: &PermGroup, keep: impl Fn(&Permutation) -> bool) -> PermGroup {
    let elements: Vec<Permutation> = group.elements.iter().filter(|g| keep(g)).cloned().collect();
    PermGroup::from_closed_set(group.degree, elements)
}

pub fn point_stabilizer(point: usize, group: &PermGroup) -> Result<PermGroup> {
    check_point(point, group.degree)?;
    Ok(subgroup_where(group, |g| g.image(point) == point))
}

/// `{ g ∈ G : block·g = block }`.
pub fn setwise_stabilizer(block: &[usize], group: &PermGroup) -> Result<PermGroup> {
    if block.is_empty() {
        return Err(Error::Domain("setwise stabilizer of an empty block".into()));
    }
    let mut member = vec![false; group.degree];
    for &x in block {
        check_point(x, group.degree)?;
        member[x] = true;
    }
    Ok(subgroup_where(group, |g| block.iter().all(|&x| member[g.image(x)])))
}

/// A conjugation witness `(g, n)` with `g⁻¹ n g ∉ N`, if `N` is not normal in `G`.
pub fn normality_witness(n: &PermGroup, g: &PermGroup) -> Result<Option<(Permutation, Permutation)>> {
    if n.degree != g.degree {
        return Err(Error::DegreeMismatch {
            left: n.degree,
            right: g.degree,
        });
    }
    if let Some(w) = n.subgroup_witness(g) {
        return Err(Error::NotSubgroup { witness: w.clone() });
    }
    for conj in &g.generators {
        for x in &n.generators {
            if !n.contains(&x.conjugate_by(conj)) {
                return Ok(Some((conj.clone(), x.clone())));
            }
        }
    }
    Ok(None)
}

pub fn is_normal(n: &PermGroup, g: &PermGroup) -> Result<bool> {
    Ok(normality_witness(n, g)?.is_none())
}

/// Returns `Err(NotNormal)` unless `N ⊴ G`.
pub fn require_normal(n: &PermGroup, g: &PermGroup) -> Result<()> {
    match normality_witness(n, g)? {
        None => Ok(()),
        Some((conjugator, element)) => Err(Error::NotNormal { conjugator, element }),
    }
}

pub fn center(group: &PermGroup) -> PermGroup {
    subgroup_where(group, |z| group.generators.iter().all(|h| z.commutes_with(h)))
}

/// Centralizer of `x` inside `group`.
pub fn centralizer(x: &Permutation, group: &PermGroup) -> PermGroup {
    subgroup_where(group, |z| z.commutes_with(x))
}

pub fn intersect(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch {
            left: a.degree,
            right: b.degree,
        });
    }
    let (small, large) = if a.order() <= b.order() { (a, b) } else { (b, a) };
    Ok(subgroup_where(small, |g| large.contains(g)))
}

/// The subgroup generated by two subgroups.
pub fn join(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let mut gens = a.generators.clone();
    gens.extend(b.generators.iter().cloned());
    generate(a.degree, &gens)
}

/// Image of a subgroup under a map given element-wise.
pub fn image_of(sub: &PermGroup, map: impl Fn(&Permutation) -> Permutation, degree: usize) -> Result<PermGroup> {
    let gens: Vec<Permutation> = sub.generators.iter().map(map).collect();
    generate(degree, &gens)
}

/// The right coset `Hg` (members sorted; representative is the least member).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub representative: Permutation,
    pub members: Vec<Permutation>,
}

/// Partition of `G` into right cosets `Hg`, ordered by representative. The
/// identity is the least permutation, so `H` itself is coset 0.
pub fn right_cosets(h: &PermGroup, g: &PermGroup) -> Result<Vec<Coset>> {
    if h.degree != g.degree {
        return Err(Error::DegreeMismatch {
            left: h.degree,
            right: g.degree,
        });
    }
    if let Some(w) = h.subgroup_witness(g) {
        return Err(Error::NotSubgroup { witness: w.clone() });
    }
    let mut assigned = vec![false; g.order()];
    let mut cosets = Vec::with_capacity(g.order() / h.order());
    for (i, x) in g.elements.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        let mut members: Vec<Permutation> = h.elements.iter().map(|k| k.then(x)).collect();
        members.sort();
        for m in &members {
            assigned[g.index[m]] = true;
        }
        cosets.push(Coset {
            representative: members[0].clone(),
            members,
        });
    }
    Ok(cosets)
}

/// Coset index of every element of `G`, for a coset list from [`right_cosets`].
pub fn coset_lookup(cosets: &[Coset], g: &PermGroup) -> Vec<usize> {
    let mut out = vec![usize::MAX; g.order()];
    for (ci, c) in cosets.iter().enumerate() {
        for m in &c.members {
            out[g.index[m]] = ci;
        }
    }
    out
}

/// `G/N`, realized as the right-multiplication action of `G` on the cosets of `N`.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: PermGroup,
    pub cosets: Vec<Coset>,
    /// Image of each element of `G`, indexed like `G.elements()`.
    projection: Vec<Permutation>,
    source: PermGroup,
    lifts: HashMap<Permutation, usize>,
}

impl QuotientGroup {
    pub fn project(&self, g: &Permutation) -> Option<&Permutation> {
        self.source.index_of(g).map(|i| &self.projection[i])
    }

    /// The least element of `G` projecting onto `x`.
    pub fn lift(&self, x: &Permutation) -> Option<&Permutation> {
        self.lifts.get(x).map(|&i| &self.source.elements[i])
    }

    pub fn project_subgroup(&self, sub: &PermGroup) -> Result<PermGroup> {
        if let Some(w) = sub.subgroup_witness(&self.source) {
            return Err(Error::NotSubgroup { witness: w.clone() });
        }
        let gens: Vec<Permutation> = sub
            .generators
            .iter()
            .map(|s| self.project(s).expect("checked membership").clone())
            .collect();
        generate(self.group.degree, &gens)
    }

    /// Full preimage in `G` of a subgroup of the quotient.
    pub fn preimage(&self, sub: &PermGroup) -> PermGroup {
        let elements = self
            .source
            .elements
            .iter()
            .zip(&self.projection)
            .filter(|(_, p)| sub.contains(p))
            .map(|(g, _)| g.clone())
            .collect();
        PermGroup::from_closed_set(self.source.degree, elements)
    }
}

pub fn quotient_group(g: &PermGroup, n: &PermGroup) -> Result<QuotientGroup> {
    require_normal(n, g)?;
    let cosets = right_cosets(n, g)?;
    let lookup = coset_lookup(&cosets, g);
    let act = |x: &Permutation| -> Permutation {
        let images = cosets
            .iter()
            .map(|c| lookup[g.index[&c.representative.then(x)]])
            .collect();
        Permutation::from_images(images).expect("right multiplication permutes cosets")
    };
    let projection: Vec<Permutation> = g.elements.iter().map(act).collect();
    let gens: Vec<Permutation> = g.generators.iter().map(act).collect();
    let group = generate(cosets.len(), &gens)?;
    let mut lifts = HashMap::new();
    for (i, p) in projection.iter().enumerate() {
        lifts.entry(p.clone()).or_insert(i);
    }
    Ok(QuotientGroup {
        group,
        cosets,
        projection,
        source: g.clone(),
        lifts,
    })
}

/// A group homomorphism materialized on every element of its source.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: PermGroup,
    target_degree: usize,
    images: Vec<Permutation>,
    kernel: PermGroup,
}

impl GroupHom {
    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn target_degree(&self) -> usize {
        self.target_degree
    }

    pub fn apply(&self, g: &Permutation) -> Option<&Permutation> {
        self.source.index_of(g).map(|i| &self.images[i])
    }

    /// Images indexed like `source().elements()`.
    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn kernel(&self) -> &PermGroup {
        &self.kernel
    }

    pub fn image_group(&self) -> Result<PermGroup> {
        let gens: Vec<Permutation> = (0..self.source.generators.len())
            .map(|i| {
                let g = &self.source.generators[i];
                self.apply(g).expect("generator is an element").clone()
            })
            .collect();
        generate(self.target_degree, &gens)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel.is_trivial()
    }

    /// `other ∘ self`: apply `self`, then `other`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        let images: Vec<Permutation> = self
            .source
            .generators
            .iter()
            .map(|g| {
                let mid = self.apply(g).expect("generator is an element");
                other
                    .apply(mid)
                    .cloned()
                    .ok_or_else(|| Error::NotSubgroup { witness: mid.clone() })
            })
            .collect::<Result<_>>()?;
        match hom_from_generator_images(&self.source, &images, other.target_degree)? {
            HomDefinition::WellDefined(h) => Ok(h),
            HomDefinition::IllDefined { .. } => Err(Error::internal("composite of homomorphisms is ill-defined")),
        }
    }
}

/// Outcome of extending a generator assignment to a homomorphism.
#[derive(Clone, Debug)]
pub enum HomDefinition {
    WellDefined(GroupHom),
    /// `image(element · generator) != image(element) · image(generator)`.
    IllDefined {
        element: Permutation,
        generator: usize,
    },
}

impl HomDefinition {
    pub fn well_defined(self) -> Option<GroupHom> {
        match self {
            HomDefinition::WellDefined(h) => Some(h),
            HomDefinition::IllDefined { .. } => None,
        }
    }
}

/// Extends `generator i ↦ images[i]` to all of `G` by evaluating stored words,
/// then checks every defining product `image(e·g) = image(e)·image(g)`.
pub fn hom_from_generator_images(
    group: &PermGroup,
    images: &[Permutation],
    target_degree: usize,
) -> Result<HomDefinition> {
    if images.len() != group.generators.len() {
        return Err(Error::Domain(format!(
            "{} generator images given for {} generators",
            images.len(),
            group.generators.len()
        )));
    }
    if let Some(p) = images.iter().find(|p| p.degree() != target_degree) {
        return Err(Error::DegreeMismatch {
            left: target_degree,
            right: p.degree(),
        });
    }
    let values: Vec<Permutation> = group
        .words
        .iter()
        .map(|w| PermGroup::evaluate_word(w, images, target_degree))
        .collect();
    for (e, image_e) in group.elements.iter().zip(&values) {
        for (i, gen) in group.generators.iter().enumerate() {
            let product = &values[group.index[&e.then(gen)]];
            if *product != image_e.then(&images[i]) {
                return Ok(HomDefinition::IllDefined {
                    element: e.clone(),
                    generator: i,
                });
            }
        }
    }
    let kernel_elements = group
        .elements
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_identity())
        .map(|(e, _)| e.clone())
        .collect();
    Ok(HomDefinition::WellDefined(GroupHom {
        source: group.clone(),
        target_degree,
        images: values,
        kernel: PermGroup::from_closed_set(group.degree, kernel_elements),
    }))
}

/// Right multiplication table over element indices, for lattice computations.
struct Cayley {
    n: usize,
    mul: Vec<u32>,
}

impl Cayley {
    fn new(group: &PermGroup) -> Result<Self> {
        let n = group.order();
        if n > LATTICE_CAP {
            return Err(Error::LimitExceeded {
                what: "group order for subgroup enumeration",
                value: n,
                limit: LATTICE_CAP,
            });
        }
        let mut mul = vec![0u32; n * n];
        for (i, a) in group.elements.iter().enumerate() {
            for (j, b) in group.elements.iter().enumerate() {
                mul[i * n + j] = group.index[&a.then(b)] as u32;
            }
        }
        Ok(Cayley { n, mul })
    }

    fn closure(&self, gens: &[usize]) -> Vec<u64> {
        let mut bits = vec![0u64; self.n.div_ceil(64)];
        bits[0] |= 1;
        let mut stack = vec![0usize];
        while let Some(e) = stack.pop() {
            for &g in gens {
                let x = self.mul[e * self.n + g] as usize;
                if bits[x / 64] & (1 << (x % 64)) == 0 {
                    bits[x / 64] |= 1 << (x % 64);
                    stack.push(x);
                }
            }
        }
        bits
    }
}

fn has_bit(bits: &[u64], i: usize) -> bool {
    bits[i / 64] & (1 << (i % 64)) != 0
}

/// Joins a family of seed subgroups until closed under pairwise joins with seeds.
fn join_closure(group: &PermGroup, cayley: &Cayley, seeds: Vec<Vec<usize>>) -> Vec<PermGroup> {
    let mut found: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    let trivial = cayley.closure(&[]);
    found.insert(trivial, Vec::new());
    let mut seed_sets = Vec::new();
    for gens in seeds {
        let bits = cayley.closure(&gens);
        seed_sets.push((bits.clone(), gens.clone()));
        found.entry(bits).or_insert(gens);
    }
    let mut queue: VecDeque<(Vec<u64>, Vec<usize>)> = found.iter().map(|(b, g)| (b.clone(), g.clone())).collect();
    while let Some((bits, gens)) = queue.pop_front() {
        for (seed_bits, seed_gens) in &seed_sets {
            let contained = seed_gens.iter().all(|&g| has_bit(&bits, g));
            if contained || seed_bits == &bits {
                continue;
            }
            let mut joined = gens.clone();
            joined.extend(seed_gens);
            let jb = cayley.closure(&joined);
            if !found.contains_key(&jb) {
                found.insert(jb.clone(), joined.clone());
                queue.push_back((jb, joined));
            }
        }
    }
    let mut groups: Vec<PermGroup> = found
        .into_keys()
        .map(|bits| {
            let elements = (0..cayley.n)
                .filter(|&i| has_bit(&bits, i))
                .map(|i| group.elements[i].clone())
                .collect();
            PermGroup::from_closed_set(group.degree, elements)
        })
        .collect();
    groups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    groups
}

/// Every subgroup of `G`, via join-closure of cyclic subgroups; sorted by
/// order, then by element list.
pub fn all_subgroups(group: &PermGroup) -> Result<Vec<PermGroup>> {
    let cayley = Cayley::new(group)?;
    let seeds = (1..group.order()).map(|i| vec![i]).collect();
    Ok(join_closure(group, &cayley, seeds))
}

pub fn conjugacy_classes(group: &PermGroup) -> Vec<Vec<Permutation>> {
    let mut assigned: HashSet<Permutation> = HashSet::new();
    let mut classes = Vec::new();
    for x in &group.elements {
        if assigned.contains(x) {
            continue;
        }
        let mut class: Vec<Permutation> = group.elements.iter().map(|g| x.conjugate_by(g)).collect();
        class.sort();
        class.dedup();
        assigned.extend(class.iter().cloned());
        classes.push(class);
    }
    classes
}

/// Every normal subgroup of `G`: normal closures of conjugacy classes, closed
/// under joins. Sorted by order, then by element list.
pub fn all_normal_subgroups(group: &PermGroup) -> Result<Vec<PermGroup>> {
    let cayley = Cayley::new(group)?;
    let seeds = conjugacy_classes(group)
        .into_iter()
        .map(|class| class.iter().map(|c| group.index[c]).collect())
        .collect();
    Ok(join_closure(group, &cayley, seeds))
}

/// A small generating set, chosen greedily in element order.
pub fn small_generating_set(group: &PermGroup) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::from([group.identity()]);
    // Prefer high-order elements: they tend to generate more per step.
    let mut candidates: Vec<&Permutation> = group.elements.iter().collect();
    candidates.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.cmp(b)));
    for p in candidates {
        if !span.contains(p) {
            gens.push(p.clone());
            span = closure_set(group.degree, &gens);
            if span.len() == group.order() {
                break;
            }
        }
    }
    gens
}

/// Brute-force isomorphism search by backtracking over generator images,
/// pruned by element orders and by well-definedness on each prefix subgroup.
/// Returns the images of `small_generating_set(a)` in `b`.
pub fn find_group_isomorphism(a: &PermGroup, b: &PermGroup) -> Result<Option<(Vec<Permutation>, Vec<Permutation>)>> {
    for g in [a, b] {
        if g.order() > ISOMORPHISM_CAP {
            return Err(Error::LimitExceeded {
                what: "group order for isomorphism search",
                value: g.order(),
                limit: ISOMORPHISM_CAP,
            });
        }
    }
    if a.order() != b.order() {
        return Ok(None);
    }
    let gens = small_generating_set(a);
    let prefixes: Vec<PermGroup> = (1..=gens.len())
        .map(|k| generate_unchecked(a.degree, gens[..k].to_vec(), usize::MAX).expect("uncapped"))
        .collect();
    let orders: Vec<usize> = gens.iter().map(Permutation::order).collect();
    let mut chosen: Vec<Permutation> = Vec::new();

    fn search(
        k: usize,
        gens: &[Permutation],
        orders: &[usize],
        prefixes: &[PermGroup],
        b: &PermGroup,
        chosen: &mut Vec<Permutation>,
    ) -> Result<bool> {
        if k == gens.len() {
            let full = &prefixes[k - 1];
            let hom = hom_from_generator_images(full, chosen, b.degree)?;
            return Ok(matches!(hom, HomDefinition::WellDefined(ref h) if h.is_injective()));
        }
        for cand in &b.elements {
            if cand.order() != orders[k] {
                continue;
            }
            chosen.push(cand.clone());
            let ok = match hom_from_generator_images(&prefixes[k], chosen, b.degree)? {
                HomDefinition::WellDefined(h) => h.is_injective(),
                HomDefinition::IllDefined { .. } => false,
            };
            if ok && search(k + 1, gens, orders, prefixes, b, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    if gens.is_empty() {
        return Ok(Some((Vec::new(), Vec::new())));
    }
    if search(0, &gens, &orders, &prefixes, b, &mut chosen)? {
        Ok(Some((gens, chosen)))
    } else {
        Ok(None)
    }
}
