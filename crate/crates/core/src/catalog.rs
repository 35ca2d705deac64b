//! Small groups and small connected quandles.
//!
//! Quandles are enumerated two independent ways: from triples `(G, H, η)`
//! over a catalog of permutation groups, and by exhaustive search over
//! operation tables. Records are deduplicated by a canonical relabeling.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::coset::{
    from_presentation, rigid_quotient_of_presentation, to_presentation, CosetPresentation, RigidOutcome,
};
use crate::error::{Error, Result};
use crate::permgroup::{all_subgroups, center, generate, PermGroup, Permutation};
use crate::quandle::{is_isomorphic, Quandle, QuandleHom};
use crate::quotient::{orbit_quotient, realizable_kernels};

/// Largest group order [`builtin_groups`] accepts. The connected quandles of
/// order 8 need a group of order 56.
pub const MAX_GROUP_ORDER: usize = 64;

/// Largest size for exhaustive table search.
pub const MAX_EXHAUSTIVE_SIZE: usize = 6;

/// Largest size for which canonical forms are computed.
pub const MAX_CANONICAL_SIZE: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct GroupSpec {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub order: usize,
}

impl GroupSpec {
    pub fn group(&self) -> Result<PermGroup> {
        let g = generate(self.degree, &self.generators)?;
        if g.order() != self.order {
            return Err(Error::internal(format!(
                "{} has order {}, expected {}",
                self.name,
                g.order(),
                self.order
            )));
        }
        Ok(g)
    }
}

fn spec(name: String, degree: usize, generators: Vec<Vec<usize>>, order: usize) -> GroupSpec {
    let generators = generators
        .into_iter()
        .map(|images| Permutation::from_images(images).expect("catalog generator"))
        .collect();
    GroupSpec {
        name,
        degree,
        generators,
        order,
    }
}

fn rotation(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// An element of multiplicative order `d` in `Z_p^*`.
fn unit_of_order(p: usize, d: usize) -> Option<usize> {
    (2..p).find(|&t| {
        let mut x = 1;
        for k in 1..=d {
            x = x * t % p;
            if x == 1 {
                return k == d;
            }
        }
        false
    })
}

/// Multiplication in GF(8) = GF(2)[x]/(x³ + x + 1), elements as bit vectors.
fn gf8_mul(a: usize, b: usize) -> usize {
    let mut product = 0;
    for i in 0..3 {
        if b >> i & 1 == 1 {
            product ^= a << i;
        }
    }
    for bit in (3..5).rev() {
        if product >> bit & 1 == 1 {
            product ^= 0b1011 << (bit - 3);
        }
    }
    product
}

/// `SL(2,3)` acting on the eight non-zero vectors of `F₃²`.
fn sl23() -> GroupSpec {
    let vectors: Vec<(usize, usize)> = (0..9).map(|i| (i / 3, i % 3)).filter(|&v| v != (0, 0)).collect();
    let act = |m: [[usize; 2]; 2]| -> Vec<usize> {
        vectors
            .iter()
            .map(|&(a, b)| {
                let image = ((a * m[0][0] + b * m[1][0]) % 3, (a * m[0][1] + b * m[1][1]) % 3);
                vectors.iter().position(|&v| v == image).expect("non-zero vector")
            })
            .collect()
    };
    spec(
        "sl(2,3)".into(),
        8,
        vec![act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])],
        24,
    )
}

/// `AGL(1,8)`: `x ↦ ax + b` over GF(8).
fn agl18() -> GroupSpec {
    let translate = (0..8).map(|x| x ^ 1).collect();
    let scale = (0..8).map(|x| gf8_mul(x, 2)).collect();
    spec("agl(1,8)".into(), 8, vec![translate, scale], 56)
}

/// Cyclic, dihedral, symmetric and alternating groups of order at most
/// `max_order`, followed by the affine groups `Z_p ⋊ C_d` (`d ≥ 3`),
/// `SL(2,3)` and `AGL(1,8)`. Families that repeat a smaller family
/// (`S2`, `A3`, `Z_p ⋊ C_2`) are skipped.
pub fn builtin_groups(max_order: usize) -> Result<Vec<GroupSpec>> {
    if max_order > MAX_GROUP_ORDER {
        return Err(Error::LimitExceeded {
            what: "catalog group order",
            value: max_order,
            limit: MAX_GROUP_ORDER,
        });
    }
    let mut out = Vec::new();
    for n in 1..=max_order {
        let gens = if n == 1 { vec![] } else { vec![rotation(n)] };
        out.push(spec(format!("cyclic({n})"), n, gens, n));
    }
    for n in (3..).take_while(|n| 2 * n <= max_order) {
        let reflection = (0..n).map(|i| (n - i) % n).collect();
        out.push(spec(format!("dihedral({n})"), n, vec![rotation(n), reflection], 2 * n));
    }
    for n in (3..).take_while(|&n| factorial(n) <= max_order) {
        let mut transposition: Vec<usize> = (0..n).collect();
        transposition.swap(0, 1);
        out.push(spec(
            format!("symmetric({n})"),
            n,
            vec![rotation(n), transposition],
            factorial(n),
        ));
    }
    for n in (4..).take_while(|&n| factorial(n) / 2 <= max_order) {
        // 3-cycles (0 1 k) generate A_n.
        let gens = (2..n)
            .map(|k| {
                let mut images: Vec<usize> = (0..n).collect();
                images[0] = 1;
                images[1] = k;
                images[k] = 0;
                images
            })
            .collect();
        out.push(spec(format!("alternating({n})"), n, gens, factorial(n) / 2));
    }
    for p in (5..=max_order).filter(|&p| is_prime(p)) {
        for d in (3..p).filter(|d| (p - 1) % d == 0 && p * d <= max_order) {
            let t = unit_of_order(p, d).expect("Z_p^* is cyclic");
            let scale = (0..p).map(|x| x * t % p).collect();
            out.push(spec(format!("affine({p},{d})"), p, vec![rotation(p), scale], p * d));
        }
    }
    if max_order >= 24 {
        out.push(sl23());
    }
    if max_order >= 56 {
        out.push(agl18());
    }
    Ok(out)
}

/// Where a catalog quandle came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Provenance {
    FromTriple {
        group: String,
        stabilizer: Vec<Permutation>,
        eta: Permutation,
    },
    ExhaustiveSearch,
    UserFile {
        path: String,
    },
}

#[derive(Clone, Debug)]
pub struct QuandleRecord {
    /// Relabeled to its canonical form when one is computed.
    pub quandle: Quandle,
    pub provenance: Provenance,
    /// Flattened canonical table, for sizes up to [`MAX_CANONICAL_SIZE`].
    pub canonical_form: Option<Vec<usize>>,
}

impl QuandleRecord {
    pub fn new(quandle: Quandle, provenance: Provenance) -> Result<Self> {
        match canonical_form(&quandle) {
            Some((form, labels)) => Ok(QuandleRecord {
                quandle: quandle.relabel(&labels)?,
                provenance,
                canonical_form: Some(form),
            }),
            None => Ok(QuandleRecord {
                quandle,
                provenance,
                canonical_form: None,
            }),
        }
    }
}

/// The lexicographically least flattened table over all relabelings, with
/// the relabeling `old ↦ new` that produces it. `None` above
/// [`MAX_CANONICAL_SIZE`].
pub fn canonical_form(q: &Quandle) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = q.size();
    if n > MAX_CANONICAL_SIZE {
        return None;
    }
    // `order[i]` is the old label placed at new position i.
    let mut order: Vec<usize> = (0..n).collect();
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut new_label = vec![0; n];
    loop {
        for (i, &old) in order.iter().enumerate() {
            new_label[old] = i;
        }
        let mut candidate = Vec::with_capacity(n * n);
        // Against the best so far: equal prefix, or already smaller.
        let mut smaller = best.is_none();
        let mut worse = false;
        'fill: for i in 0..n {
            for j in 0..n {
                let entry = new_label[q.op(order[i], order[j])];
                if !smaller {
                    let current = best.as_ref().expect("compared only against a best").0[candidate.len()];
                    if entry > current {
                        worse = true;
                        break 'fill;
                    }
                    smaller = entry < current;
                }
                candidate.push(entry);
            }
        }
        if !worse && smaller {
            best = Some((candidate, new_label.clone()));
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    best
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("successor exists");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Sorts records and keeps one per isomorphism class, preferring the earliest.
fn dedup_records(mut records: Vec<QuandleRecord>) -> Vec<QuandleRecord> {
    if records.iter().all(|r| r.canonical_form.is_some()) {
        let mut by_form: BTreeMap<Vec<usize>, QuandleRecord> = BTreeMap::new();
        for r in records {
            by_form.entry(r.canonical_form.clone().expect("checked")).or_insert(r);
        }
        return by_form.into_values().collect();
    }
    let mut out: Vec<QuandleRecord> = Vec::new();
    for r in records.drain(..) {
        if !out
            .iter()
            .any(|kept| is_isomorphic(&kept.quandle, &r.quandle).is_some())
        {
            out.push(r);
        }
    }
    out
}

/// Connected quandles of size `n` presented by triples over
/// [`builtin_groups`]`(max_group_order)`, one per isomorphism class.
pub fn enumerate_connected_by_triples(n: usize, max_group_order: usize) -> Result<Vec<QuandleRecord>> {
    if n == 0 {
        return Err(Error::Domain("quandle size must be at least 1".into()));
    }
    let groups = builtin_groups(max_group_order)?;
    let found: Vec<Vec<QuandleRecord>> = groups
        .par_iter()
        .filter(|spec| spec.order % n == 0)
        .map(|spec| triples_over(spec, n))
        .collect::<Result<_>>()?;
    Ok(dedup_records(found.into_iter().flatten().collect()))
}

fn triples_over(spec: &GroupSpec, n: usize) -> Result<Vec<QuandleRecord>> {
    let g = spec.group()?;
    let mut out = Vec::new();
    for h in all_subgroups(&g)? {
        if h.order() * n != g.order() {
            continue;
        }
        for eta in center(&h).elements() {
            let p = CosetPresentation::new(g.clone(), h.clone(), eta.clone())?;
            if p.check().is_err() {
                continue;
            }
            let cq = from_presentation(&p)?;
            let provenance = Provenance::FromTriple {
                group: spec.name.clone(),
                stabilizer: h.generators().to_vec(),
                eta: eta.clone(),
            };
            out.push(QuandleRecord::new(cq.quandle, provenance)?);
        }
    }
    Ok(dedup_records(out))
}

fn permutations_fixing(n: usize, fixed: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        if order[fixed] == fixed {
            out.push(order.clone());
        }
        if !next_permutation(&mut order) {
            return out;
        }
    }
}

/// Fills in every column forced by `S_{S_z(y)} = S_z S_y S_z⁻¹` and reports
/// whether the assigned columns are consistent.
fn propagate(columns: &mut [Option<Vec<usize>>]) -> bool {
    let n = columns.len();
    loop {
        let mut changed = false;
        for z in 0..n {
            let Some(sz) = columns[z].clone() else { continue };
            let mut sz_inv = vec![0; n];
            for (x, &image) in sz.iter().enumerate() {
                sz_inv[image] = x;
            }
            for y in 0..n {
                let Some(sy) = &columns[y] else { continue };
                let w = sz[y];
                let forced: Vec<usize> = (0..n).map(|x| sz[sy[sz_inv[x]]]).collect();
                match &columns[w] {
                    Some(existing) if *existing != forced => return false,
                    Some(_) => {}
                    None => {
                        columns[w] = Some(forced);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(columns: Vec<Option<Vec<usize>>>, out: &mut Vec<Quandle>) -> Result<()> {
    let n = columns.len();
    let Some(y) = columns.iter().position(Option::is_none) else {
        let mut flat = vec![0; n * n];
        for (y, column) in columns.iter().enumerate() {
            for (x, &v) in column.as_ref().expect("complete").iter().enumerate() {
                flat[x * n + y] = v;
            }
        }
        out.push(
            Quandle::from_flat(n, &flat).map_err(|e| Error::internal(format!("search produced a non-quandle: {e}")))?,
        );
        return Ok(());
    };
    for column in permutations_fixing(n, y) {
        let mut trial = columns.clone();
        trial[y] = Some(column);
        if propagate(&mut trial) {
            search(trial, out)?;
        }
    }
    Ok(())
}

/// Every quandle of size `n`, one per isomorphism class.
pub fn enumerate_all_exhaustive(n: usize) -> Result<Vec<QuandleRecord>> {
    exhaustive(n, false)
}

/// Connected quandles of size `n` by exhaustive table search.
pub fn enumerate_connected_exhaustive(n: usize) -> Result<Vec<QuandleRecord>> {
    exhaustive(n, true)
}

fn exhaustive(n: usize, connected_only: bool) -> Result<Vec<QuandleRecord>> {
    if n == 0 {
        return Err(Error::Domain("quandle size must be at least 1".into()));
    }
    if n > MAX_EXHAUSTIVE_SIZE {
        return Err(Error::LimitExceeded {
            what: "exhaustive search size",
            value: n,
            limit: MAX_EXHAUSTIVE_SIZE,
        });
    }
    let found: Vec<Vec<QuandleRecord>> = permutations_fixing(n, 0)
        .into_par_iter()
        .map(|first| {
            let mut columns = vec![None; n];
            columns[0] = Some(first);
            let mut tables = Vec::new();
            if propagate(&mut columns) {
                search(columns, &mut tables)?;
            }
            let records = tables
                .into_iter()
                .filter(|q| !connected_only || q.is_connected())
                .map(|q| QuandleRecord::new(q, Provenance::ExhaustiveSearch))
                .collect::<Result<Vec<_>>>()?;
            Ok(dedup_records(records))
        })
        .collect::<Result<_>>()?;
    Ok(dedup_records(found.into_iter().flatten().collect()))
}

/// Connected quandles of sizes `1..=max_size` from triples over the full
/// group catalog.
pub fn connected_catalog(max_size: usize) -> Result<Vec<QuandleRecord>> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        out.extend(enumerate_connected_by_triples(n, MAX_GROUP_ORDER)?);
    }
    Ok(out)
}

/// The partition of the source induced by a map, labelled by first occurrence.
pub fn kernel_partition(map: &[usize]) -> Vec<usize> {
    let mut relabel = BTreeMap::new();
    map.iter()
        .map(|v| {
            let next = relabel.len();
            *relabel.entry(v).or_insert(next)
        })
        .collect()
}

/// Surjections from a connected quandle onto connected quandles, one per
/// kernel partition: orbit quotients by realizable kernels followed by the
/// rigid quotients of each orbit quotient.
pub fn connected_surjections(q: &Quandle) -> Result<Vec<QuandleHom>> {
    q.require_connected()?;
    let mut by_partition: BTreeMap<Vec<usize>, QuandleHom> = BTreeMap::new();
    for n in realizable_kernels(q)? {
        let oq = orbit_quotient(q, &n)?;
        let (pres, _) = to_presentation(&oq.quotient, 0)?;
        for k in all_subgroups(&pres.group)? {
            if !pres.stabilizer.is_subgroup_of(&k) {
                continue;
            }
            if let RigidOutcome::Rigid(c) = rigid_quotient_of_presentation(&pres, &k)? {
                let h = oq.projection.then(&c)?;
                by_partition.entry(kernel_partition(h.map())).or_insert(h);
            }
        }
    }
    Ok(by_partition.into_values().collect())
}
