//! Finite quandles as operation tables.
//!
//! Elements are `0..n`. `table[x][y] = x ▷ y`; the symmetry `S_y` is the
//! column map `x ↦ x ▷ y`. Inner automorphisms act on the right, matching
//! [`crate::permgroup`], so `S_{x·g} = g⁻¹ S_x g`.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permgroup::{self, PermGroup, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomViolation {
    /// `x ▷ x != x`.
    Idempotence { x: usize, value: usize },
    /// `first ▷ column == second ▷ column` with `first != second`.
    RightInvertibility {
        column: usize,
        first: usize,
        second: usize,
        value: usize,
    },
    /// `(x ▷ y) ▷ z != (x ▷ z) ▷ (y ▷ z)`.
    Distributivity { x: usize, y: usize, z: usize },
}

impl AxiomViolation {
    /// "i", "ii" or "iii".
    pub fn axiom(&self) -> &'static str {
        match self {
            AxiomViolation::Idempotence { .. } => "i",
            AxiomViolation::RightInvertibility { .. } => "ii",
            AxiomViolation::Distributivity { .. } => "iii",
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AxiomViolation::Idempotence { x, value } => {
                write!(f, "axiom i (idempotence): {x} > {x} = {value}")
            }
            AxiomViolation::RightInvertibility {
                column,
                first,
                second,
                value,
            } => write!(
                f,
                "axiom ii (right invertibility), column {column}: {first} > {column} = {second} > {column} = {value}"
            ),
            AxiomViolation::Distributivity { x, y, z } => write!(
                f,
                "axiom iii (right distributivity): ({x} > {y}) > {z} != ({x} > {z}) > ({y} > {z})"
            ),
        }
    }
}

pub struct Quandle {
    size: usize,
    table: Vec<u32>,
    inv_table: Vec<u32>,
    inn: OnceLock<PermGroup>,
}

impl Clone for Quandle {
    fn clone(&self) -> Self {
        let inn = OnceLock::new();
        if let Some(g) = self.inn.get() {
            let _ = inn.set(g.clone());
        }
        Quandle {
            size: self.size,
            table: self.table.clone(),
            inv_table: self.inv_table.clone(),
            inn,
        }
    }
}

impl PartialEq for Quandle {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.table == other.table
    }
}

impl Eq for Quandle {}

impl fmt::Debug for Quandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quandle")
            .field("size", &self.size)
            .field("table", &self.rows())
            .finish()
    }
}

impl Quandle {
    /// Checks the three axioms and derives `▷⁻¹`.
    pub fn validate(rows: &[Vec<usize>]) -> Result<Quandle> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!(
                    "row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        Quandle::from_flat(n, &flat)
    }

    /// Row-major `n × n` table.
    pub fn from_flat(n: usize, flat: &[usize]) -> Result<Quandle> {
        if n == 0 || flat.len() != n * n {
            return Err(Error::MalformedTable(format!("{} entries for size {n}", flat.len())));
        }
        if let Some((i, &v)) = flat.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::MalformedTable(format!(
                "entry {v} at row {}, column {} is out of range",
                i / n,
                i % n
            )));
        }
        let table: Vec<u32> = flat.iter().map(|&v| v as u32).collect();
        let at = |x: usize, y: usize| table[x * n + y] as usize;

        for x in 0..n {
            if at(x, x) != x {
                return Err(Error::Axiom(AxiomViolation::Idempotence { x, value: at(x, x) }));
            }
        }
        let mut inv_table = vec![0u32; n * n];
        for y in 0..n {
            let mut preimage = vec![usize::MAX; n];
            for x in 0..n {
                let v = at(x, y);
                if preimage[v] != usize::MAX {
                    return Err(Error::Axiom(AxiomViolation::RightInvertibility {
                        column: y,
                        first: preimage[v],
                        second: x,
                        value: v,
                    }));
                }
                preimage[v] = x;
                inv_table[v * n + y] = x as u32;
            }
        }
        for z in 0..n {
            for y in 0..n {
                for x in 0..n {
                    if at(at(x, y), z) != at(at(x, z), at(y, z)) {
                        return Err(Error::Axiom(AxiomViolation::Distributivity { x, y, z }));
                    }
                }
            }
        }
        Ok(Quandle {
            size: n,
            table,
            inv_table,
            inn: OnceLock::new(),
        })
    }

    /// The trivial quandle `x ▷ y = x`.
    pub fn trivial(n: usize) -> Quandle {
        let flat: Vec<usize> = (0..n).flat_map(|x| std::iter::repeat_n(x, n)).collect();
        Quandle::from_flat(n, &flat).expect("trivial quandle")
    }

    /// The dihedral quandle `x ▷ y = 2y − x mod n`.
    pub fn dihedral(n: usize) -> Quandle {
        Quandle::alexander(n, n - 1).expect("dihedral quandle")
    }

    /// The Alexander quandle on `Z_n` with `x ▷ y = t·x + (1 − t)·y`.
    pub fn alexander(n: usize, t: usize) -> Result<Quandle> {
        let t = t % n;
        let flat: Vec<usize> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (t * x + (n + 1 - t) * y) % n))
            .collect();
        Quandle::from_flat(n, &flat)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y] as usize
    }

    #[inline]
    pub fn inv_op(&self, x: usize, y: usize) -> usize {
        self.inv_table[x * self.size + y] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|x| (0..self.size).map(|y| self.op(x, y)).collect())
            .collect()
    }

    pub fn flat(&self) -> Vec<usize> {
        self.table.iter().map(|&v| v as usize).collect()
    }

    fn check(&self, x: usize) -> Result<()> {
        if x >= self.size {
            return Err(Error::PointOutOfRange {
                point: x,
                degree: self.size,
            });
        }
        Ok(())
    }

    /// `S_x : y ↦ y ▷ x`.
    pub fn symmetry(&self, x: usize) -> Result<Permutation> {
        self.check(x)?;
        Ok(self.symmetry_unchecked(x))
    }

    pub(crate) fn symmetry_unchecked(&self, x: usize) -> Permutation {
        Permutation::from_images((0..self.size).map(|y| self.op(y, x)).collect()).expect("columns are bijections")
    }

    pub fn symmetries(&self) -> Vec<Permutation> {
        (0..self.size).map(|x| self.symmetry_unchecked(x)).collect()
    }

    /// `Inn(Q)`, generated by `S_0, …, S_{n−1}` in that order. Computed once.
    pub fn inn(&self) -> Result<&PermGroup> {
        if let Some(g) = self.inn.get() {
            return Ok(g);
        }
        let g = permgroup::generate(self.size, &self.symmetries())?;
        let _ = self.inn.set(g);
        Ok(self.inn.get().expect("just set"))
    }

    /// Orbits under `Inn(Q)`, found by search over the symmetries.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut block_of = vec![usize::MAX; self.size];
        let mut blocks = Vec::new();
        for start in 0..self.size {
            if block_of[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            block_of[start] = id;
            let mut block = vec![start];
            let mut i = 0;
            while i < block.len() {
                let x = block[i];
                i += 1;
                for y in 0..self.size {
                    let z = self.op(x, y);
                    if block_of[z] == usize::MAX {
                        block_of[z] = id;
                        block.push(z);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks
    }

    pub fn is_connected(&self) -> bool {
        self.orbits().len() == 1
    }

    /// `Err(Disconnected)` carrying the orbit partition, unless connected.
    pub fn require_connected(&self) -> Result<()> {
        let orbits = self.orbits();
        if orbits.len() == 1 {
            Ok(())
        } else {
            Err(Error::Disconnected { orbits })
        }
    }

    /// Per-element isomorphism invariant: cycle type of `S_x` and orbit size.
    fn invariants(&self) -> Vec<(Vec<usize>, usize)> {
        let orbits = self.orbits();
        let mut orbit_size = vec![0; self.size];
        for b in &orbits {
            for &x in b {
                orbit_size[x] = b.len();
            }
        }
        (0..self.size)
            .map(|x| (self.symmetry_unchecked(x).cycle_type(), orbit_size[x]))
            .collect()
    }

    /// Relabels elements: element `x` becomes `labels[x]`.
    pub fn relabel(&self, labels: &[usize]) -> Result<Quandle> {
        let n = self.size;
        let mut flat = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                flat[labels[x] * n + labels[y]] = labels[self.op(x, y)];
            }
        }
        Quandle::from_flat(n, &flat)
    }
}

/// A map between quandle carriers satisfying `f(x ▷ y) = f(x) ▷ f(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuandleHom {
    source: Quandle,
    target: Quandle,
    map: Vec<usize>,
}

impl QuandleHom {
    pub fn source(&self) -> &Quandle {
        &self.source
    }

    pub fn target(&self) -> &Quandle {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn identity(q: &Quandle) -> QuandleHom {
        QuandleHom {
            source: q.clone(),
            target: q.clone(),
            map: (0..q.size()).collect(),
        }
    }

    /// The first target element with no preimage.
    pub fn surjectivity_witness(&self) -> Option<usize> {
        let mut hit = vec![false; self.target.size()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.iter().position(|h| !h)
    }

    pub fn is_surjective(&self) -> bool {
        self.surjectivity_witness().is_none()
    }

    pub fn require_surjective(&self) -> Result<()> {
        match self.surjectivity_witness() {
            None => Ok(()),
            Some(missing) => Err(Error::NotSurjective { missing }),
        }
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_surjective()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &QuandleHom) -> Result<QuandleHom> {
        if self.target != other.source {
            return Err(Error::Domain("composing homomorphisms with mismatched quandles".into()));
        }
        Ok(QuandleHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        })
    }
}

/// Validates `map` as a homomorphism `source → target`. Pairs are scanned
/// column by column, and the first failing `(x, y)` is reported.
pub fn check_hom(map: &[usize], source: &Quandle, target: &Quandle) -> Result<QuandleHom> {
    if map.len() != source.size() {
        return Err(Error::Domain(format!(
            "map has {} entries for a source of size {}",
            map.len(),
            source.size()
        )));
    }
    if let Some(&v) = map.iter().find(|&&v| v >= target.size()) {
        return Err(Error::PointOutOfRange {
            point: v,
            degree: target.size(),
        });
    }
    for y in 0..source.size() {
        for x in 0..source.size() {
            if map[source.op(x, y)] != target.op(map[x], map[y]) {
                return Err(Error::NotHomomorphism { x, y });
            }
        }
    }
    Ok(QuandleHom {
        source: source.clone(),
        target: target.clone(),
        map: map.to_vec(),
    })
}

/// The quandle on the conjugacy classes of `seeds` in `group`, with
/// `x ▷ y = y⁻¹ x y`, so that `S_y` is conjugation by `y` under the
/// right-action convention. Elements are labeled in permutation order.
pub fn conj_quandle(group: &PermGroup, seeds: &[Permutation]) -> Result<(Quandle, Vec<Permutation>)> {
    let mut carrier: Vec<Permutation> = Vec::new();
    for s in seeds {
        if !group.contains(s) {
            return Err(Error::NotSubgroup { witness: s.clone() });
        }
        carrier.extend(group.elements().iter().map(|g| s.conjugate_by(g)));
    }
    if carrier.is_empty() {
        return Err(Error::Domain("conjugation quandle needs at least one seed".into()));
    }
    carrier.sort();
    carrier.dedup();
    let n = carrier.len();
    let position = |p: &Permutation| carrier.binary_search(p).expect("classes are closed");
    let mut flat = vec![0; n * n];
    for (x, px) in carrier.iter().enumerate() {
        for (y, py) in carrier.iter().enumerate() {
            flat[x * n + y] = position(&px.conjugate_by(py));
        }
    }
    let q = Quandle::from_flat(n, &flat)?;
    Ok((q, carrier))
}

/// The subquandle on the image of `h`, with its inclusion labeling into the target.
pub fn image_subquandle(h: &QuandleHom) -> (Quandle, Vec<usize>) {
    let mut labels: Vec<usize> = h.map.clone();
    labels.sort_unstable();
    labels.dedup();
    let m = labels.len();
    let mut flat = vec![0; m * m];
    for (i, &a) in labels.iter().enumerate() {
        for (j, &b) in labels.iter().enumerate() {
            let c = h.target.op(a, b);
            flat[i * m + j] = labels.binary_search(&c).expect("image is closed under the operation");
        }
    }
    let q = Quandle::from_flat(m, &flat).expect("subquandle of a quandle");
    (q, labels)
}

/// A quandle isomorphism `q → r`, if one exists. Backtracks over images in
/// element order, restricted to elements with matching invariants and
/// propagating forced images through the operation.
pub fn is_isomorphic(q: &Quandle, r: &Quandle) -> Option<QuandleHom> {
    let n = q.size();
    if n != r.size() {
        return None;
    }
    let inv_q = q.invariants();
    let inv_r = r.invariants();
    let mut sorted_q = inv_q.clone();
    let mut sorted_r = inv_r.clone();
    sorted_q.sort();
    sorted_r.sort();
    if sorted_q != sorted_r {
        return None;
    }

    fn propagate(
        q: &Quandle,
        r: &Quandle,
        inv_q: &[(Vec<usize>, usize)],
        inv_r: &[(Vec<usize>, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = q.size();
        loop {
            let mut changed = false;
            for a in 0..n {
                if map[a] == usize::MAX {
                    continue;
                }
                for b in 0..n {
                    if map[b] == usize::MAX {
                        continue;
                    }
                    let c = q.op(a, b);
                    let want = r.op(map[a], map[b]);
                    if map[c] == usize::MAX {
                        if used[want] || inv_q[c] != inv_r[want] {
                            return false;
                        }
                        map[c] = want;
                        used[want] = true;
                        changed = true;
                    } else if map[c] != want {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(
        q: &Quandle,
        r: &Quandle,
        inv_q: &[(Vec<usize>, usize)],
        inv_r: &[(Vec<usize>, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(x) = map.iter().position(|&m| m == usize::MAX) else {
            return true;
        };
        for y in 0..r.size() {
            if used[y] || inv_q[x] != inv_r[y] {
                continue;
            }
            let mut m2 = map.clone();
            let mut u2 = used.clone();
            m2[x] = y;
            u2[y] = true;
            if propagate(q, r, inv_q, inv_r, &mut m2, &mut u2) && search(q, r, inv_q, inv_r, &mut m2, &mut u2) {
                *map = m2;
                *used = u2;
                return true;
            }
        }
        false
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !search(q, r, &inv_q, &inv_r, &mut map, &mut used) {
        return None;
    }
    let hom = check_hom(&map, q, r).expect("search only completes on homomorphisms");
    debug_assert!(hom.is_bijective());
    Some(hom)
}
