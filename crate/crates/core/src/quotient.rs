//! Orbit quotients `Q/N` by normal subgroups of `Inn(Q)`, realizable kernels
//! and their closure, rigid quotients, and the orbit-then-rigid splitting of
//! a surjection.

use serde::Serialize;

use crate::augment::induced_inn_hom;
use crate::error::{Error, Result};
use crate::permgroup::{self, all_normal_subgroups, intersect, setwise_stabilizer, PermGroup, Permutation};
use crate::quandle::{check_hom, Quandle, QuandleHom};

/// `Q/N` together with its projection `g_N`.
#[derive(Clone, Debug)]
pub struct OrbitQuotient {
    pub source: Quandle,
    pub kernel_subgroup: PermGroup,
    pub quotient: Quandle,
    pub projection: QuandleHom,
    pub block_of: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
}

fn require_inside_inn(q: &Quandle, n: &PermGroup) -> Result<()> {
    if n.degree() != q.size() {
        return Err(Error::DegreeMismatch {
            left: q.size(),
            right: n.degree(),
        });
    }
    if let Some(w) = n.subgroup_witness(q.inn()?) {
        return Err(Error::NotSubgroup { witness: w.clone() });
    }
    Ok(())
}

/// Orbit partition of the carrier under `N ≤ Inn(Q)`, blocks ordered by least element.
pub fn orbits_under(q: &Quandle, n: &PermGroup) -> Result<Vec<Vec<usize>>> {
    require_inside_inn(q, n)?;
    Ok(permgroup::orbits(n))
}

/// Outcome of [`is_congruence`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Congruence {
    Holds,
    /// Both pairs lie in the same pair of blocks, but their products do not.
    Fails {
        first: (usize, usize),
        second: (usize, usize),
    },
}

impl Congruence {
    pub fn holds(&self) -> bool {
        matches!(self, Congruence::Holds)
    }
}

fn block_index(q: &Quandle, partition: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut block_of = vec![usize::MAX; q.size()];
    for (i, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::Domain(format!("block {i} is empty")));
        }
        for &x in block {
            if x >= q.size() {
                return Err(Error::PointOutOfRange {
                    point: x,
                    degree: q.size(),
                });
            }
            if block_of[x] != usize::MAX {
                return Err(Error::Domain(format!("element {x} lies in two blocks")));
            }
            block_of[x] = i;
        }
    }
    if let Some(x) = block_of.iter().position(|&b| b == usize::MAX) {
        return Err(Error::Domain(format!("element {x} lies in no block")));
    }
    Ok(block_of)
}

/// Whether `[q ▷ r]` depends only on `([q], [r])`.
pub fn is_congruence(q: &Quandle, partition: &[Vec<usize>]) -> Result<Congruence> {
    let block_of = block_index(q, partition)?;
    for a in partition {
        for b in partition {
            let reference = (a[0], b[0]);
            let expected = block_of[q.op(a[0], b[0])];
            for &x in a {
                for &y in b {
                    if block_of[q.op(x, y)] != expected {
                        return Ok(Congruence::Fails {
                            first: reference,
                            second: (x, y),
                        });
                    }
                }
            }
        }
    }
    Ok(Congruence::Holds)
}

/// Builds `Q/N` with `[q] ▷ [r] = [q ▷ r]`. `N` must be normal in `Inn(Q)`.
///
/// Also checks that `Inn(Q)` permutes the blocks, so the action
/// `[s]·g = [s·g]` on the quotient is well defined and the projection is
/// equivariant.
pub fn orbit_quotient(q: &Quandle, n: &PermGroup) -> Result<OrbitQuotient> {
    require_inside_inn(q, n)?;
    permgroup::require_normal(n, q.inn()?)?;
    let blocks = permgroup::orbits(n);
    let block_of = block_index(q, &blocks)?;

    for g in q.inn()?.generators() {
        for block in &blocks {
            let target = block_of[g.image(block[0])];
            if block.iter().any(|&x| block_of[g.image(x)] != target) {
                return Err(Error::internal(
                    "Inn(Q) does not permute the orbits of a normal subgroup",
                ));
            }
        }
    }
    if let Congruence::Fails { first, second } = is_congruence(q, &blocks)? {
        return Err(Error::internal(format!(
            "orbits of a normal subgroup are not a congruence: {first:?} vs {second:?}"
        )));
    }

    let m = blocks.len();
    let mut flat = vec![0; m * m];
    for (i, a) in blocks.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate() {
            flat[i * m + j] = block_of[q.op(a[0], b[0])];
        }
    }
    let quotient = Quandle::from_flat(m, &flat).map_err(|e| Error::internal(format!("orbit quotient table: {e}")))?;
    let projection = check_hom(&block_of, q, &quotient)?;
    Ok(OrbitQuotient {
        source: q.clone(),
        kernel_subgroup: n.clone(),
        quotient,
        projection,
        block_of,
        blocks,
    })
}

/// `N^Q` computed two ways: as `ker(Inn(c_N))` and as the intersection of the
/// setwise stabilizers of the `N`-orbits. The two must agree.
pub fn realizable_closure_both(q: &Quandle, n: &PermGroup) -> Result<(PermGroup, PermGroup)> {
    let oq = orbit_quotient(q, n)?;
    let via_kernel = induced_inn_hom(&oq.projection)?.kernel().clone();
    let inn = q.inn()?;
    let mut via_stabilizers = inn.clone();
    for block in &oq.blocks {
        via_stabilizers = intersect(&via_stabilizers, &setwise_stabilizer(block, inn)?)?;
    }
    if via_kernel != via_stabilizers {
        return Err(Error::internal(format!(
            "closure formulas disagree: |ker Inn(c_N)| = {}, |⋂ G_[x]| = {}",
            via_kernel.order(),
            via_stabilizers.order()
        )));
    }
    Ok((via_kernel, via_stabilizers))
}

/// The smallest realizable kernel containing `N`.
pub fn realizable_closure(q: &Quandle, n: &PermGroup) -> Result<PermGroup> {
    Ok(realizable_closure_both(q, n)?.0)
}

pub fn is_realizable_kernel(q: &Quandle, n: &PermGroup) -> Result<bool> {
    Ok(realizable_closure(q, n)? == *n)
}

/// `Err(NotRealizable)` with an element of `N^Q \ N`, unless `N` is realizable.
pub fn require_realizable(q: &Quandle, n: &PermGroup) -> Result<()> {
    let closure = realizable_closure(q, n)?;
    match closure.elements().iter().find(|g| !n.contains(g)) {
        None => Ok(()),
        Some(w) => Err(Error::NotRealizable { witness: w.clone() }),
    }
}

/// Realizable kernels of `Inn(Q)`, in the order of [`all_normal_subgroups`].
pub fn realizable_kernels(q: &Quandle) -> Result<Vec<PermGroup>> {
    let mut out = Vec::new();
    for n in all_normal_subgroups(q.inn()?)? {
        if is_realizable_kernel(q, &n)? {
            out.push(n);
        }
    }
    Ok(out)
}

/// A surjection is rigid when `Inn(h)` is an isomorphism.
pub fn is_rigid(h: &QuandleHom) -> Result<bool> {
    let inn_h = induced_inn_hom(h)?;
    Ok(inn_h.kernel().is_trivial() && inn_h.image_group()?.order() == h.target().inn()?.order())
}

/// `h = f ∘ g_N` with `N = ker(Inn(h))` and `f` rigid.
#[derive(Clone, Debug)]
pub struct SurjectionFactorization {
    pub kernel: PermGroup,
    pub orbit: OrbitQuotient,
    pub rigid: QuandleHom,
}

pub fn factor_surjection(h: &QuandleHom) -> Result<SurjectionFactorization> {
    h.require_surjective()?;
    let kernel = induced_inn_hom(h)?.kernel().clone();
    let orbit = orbit_quotient(h.source(), &kernel)?;
    let mut f = vec![usize::MAX; orbit.quotient.size()];
    for (x, &b) in orbit.block_of.iter().enumerate() {
        if f[b] == usize::MAX {
            f[b] = h.apply(x);
        } else if f[b] != h.apply(x) {
            return Err(Error::internal(format!(
                "h is not constant on the ker Inn(h)-orbit of {x}"
            )));
        }
    }
    let rigid = check_hom(&f, &orbit.quotient, h.target())
        .map_err(|e| Error::internal(format!("induced map Q/N → R is not a homomorphism: {e}")))?;
    if orbit.projection.then(&rigid)?.map() != h.map() {
        return Err(Error::internal("f ∘ g_N != h"));
    }
    if !is_rigid(&rigid)? {
        return Err(Error::internal("induced map Q/ker Inn(h) → R is not rigid"));
    }
    Ok(SurjectionFactorization { kernel, orbit, rigid })
}

/// Outcome of [`omega`].
#[derive(Clone, Debug)]
pub enum OmegaOutcome {
    Exists(QuandleHom),
    /// An element of `N₁ \ N₂`.
    NotContained {
        witness: Permutation,
    },
}

/// The map `Q/N₁ → Q/N₂`, `q·N₁ ↦ q·N₂`, for realizable kernels `N₁, N₂`.
/// It exists exactly when `N₁ ⊆ N₂`.
pub fn omega(q: &Quandle, n1: &PermGroup, n2: &PermGroup) -> Result<OmegaOutcome> {
    require_realizable(q, n1)?;
    require_realizable(q, n2)?;
    if let Some(w) = n1.subgroup_witness(n2) {
        return Ok(OmegaOutcome::NotContained { witness: w.clone() });
    }
    let q1 = orbit_quotient(q, n1)?;
    let q2 = orbit_quotient(q, n2)?;
    let mut map = vec![usize::MAX; q1.quotient.size()];
    for x in 0..q.size() {
        let (a, b) = (q1.block_of[x], q2.block_of[x]);
        if map[a] != usize::MAX && map[a] != b {
            return Err(Error::internal("Ω is not well defined although N₁ ⊆ N₂"));
        }
        map[a] = b;
    }
    let om = check_hom(&map, &q1.quotient, &q2.quotient)
        .map_err(|e| Error::internal(format!("Ω is not a homomorphism: {e}")))?;
    if q1.projection.then(&om)?.map() != q2.projection.map() {
        return Err(Error::internal("Ω ∘ g_N₁ != g_N₂"));
    }
    Ok(OmegaOutcome::Exists(om))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::generate;

    fn p(degree: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, degree).unwrap()
    }

    fn r3() -> Quandle {
        Quandle::dihedral(3)
    }

    #[test]
    fn orbits_under_examples() {
        let q = r3();
        assert_eq!(
            orbits_under(&q, &PermGroup::trivial(3)).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        let a3 = generate(3, &[p(3, "(0 1 2)")]).unwrap();
        assert_eq!(orbits_under(&q, &a3).unwrap(), vec![vec![0, 1, 2]]);
        let c2 = generate(3, &[p(3, "(1 2)")]).unwrap();
        assert_eq!(orbits_under(&q, &c2).unwrap(), vec![vec![0], vec![1, 2]]);
        // (0 1 2) does not lie in Inn(T3).
        assert!(orbits_under(&Quandle::trivial(3), &a3).is_err());
    }

    #[test]
    fn congruence_examples() {
        let q = r3();
        assert!(is_congruence(&q, &[vec![0], vec![1], vec![2]]).unwrap().holds());
        assert_eq!(
            is_congruence(&q, &[vec![0], vec![1, 2]]).unwrap(),
            Congruence::Fails {
                first: (1, 1),
                second: (1, 2)
            }
        );
        assert!(is_congruence(&q, &[vec![0, 1, 2]]).unwrap().holds());
        assert!(is_congruence(&q, &[vec![0], vec![1]]).is_err());
        assert!(is_congruence(&q, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(is_congruence(&q, &[vec![0, 1, 2], vec![]]).is_err());
    }

    #[test]
    fn orbit_quotient_examples() {
        let q = r3();
        let oq = orbit_quotient(&q, &PermGroup::trivial(3)).unwrap();
        assert_eq!(oq.quotient, q);
        assert_eq!(oq.projection.map(), &[0, 1, 2]);

        let oq = orbit_quotient(&q, q.inn().unwrap()).unwrap();
        assert_eq!(oq.quotient.size(), 1);

        let c2 = generate(3, &[p(3, "(1 2)")]).unwrap();
        assert!(matches!(orbit_quotient(&q, &c2), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn orbit_quotient_of_dihedral_four() {
        // Inn(R4) = {id, S0, S1, S0S1}; S0S1 is translation by 2.
        let r4 = Quandle::dihedral(4);
        let s0s1 = r4.symmetry(0).unwrap().then(&r4.symmetry(1).unwrap());
        let n = generate(4, &[s0s1]).unwrap();
        assert!(permgroup::is_normal(&n, r4.inn().unwrap()).unwrap());
        let oq = orbit_quotient(&r4, &n).unwrap();
        assert_eq!(oq.blocks, vec![vec![0, 2], vec![1, 3]]);
        assert!(is_congruence(&r4, &oq.blocks).unwrap().holds());
        assert_eq!(oq.quotient, Quandle::trivial(2));
    }

    #[test]
    fn closure_examples() {
        let q = r3();
        assert!(realizable_closure(&q, &PermGroup::trivial(3)).unwrap().is_trivial());
        let a3 = generate(3, &[p(3, "(0 1 2)")]).unwrap();
        assert_eq!(realizable_closure(&q, &a3).unwrap().order(), 6);
        assert_eq!(&realizable_closure(&q, q.inn().unwrap()).unwrap(), q.inn().unwrap());

        assert!(is_realizable_kernel(&q, &PermGroup::trivial(3)).unwrap());
        assert!(!is_realizable_kernel(&q, &a3).unwrap());
        assert!(is_realizable_kernel(&q, q.inn().unwrap()).unwrap());
        assert!(matches!(require_realizable(&q, &a3), Err(Error::NotRealizable { .. })));
    }

    #[test]
    fn rigidity_examples() {
        let q = r3();
        assert!(is_rigid(&QuandleHom::identity(&q)).unwrap());
        let collapse = check_hom(&[0, 0, 0], &q, &Quandle::trivial(1)).unwrap();
        assert!(!is_rigid(&collapse).unwrap());
        let swap = check_hom(&[0, 2, 1], &q, &q).unwrap();
        assert!(is_rigid(&swap).unwrap());
    }

    #[test]
    fn factor_surjection_examples() {
        let q = r3();
        let f = factor_surjection(&QuandleHom::identity(&q)).unwrap();
        assert!(f.kernel.is_trivial());
        assert_eq!(f.rigid.map(), &[0, 1, 2]);

        let collapse = check_hom(&[0, 0, 0], &q, &Quandle::trivial(1)).unwrap();
        let f = factor_surjection(&collapse).unwrap();
        assert_eq!(f.kernel.order(), 6);
        assert_eq!(f.orbit.quotient.size(), 1);
        assert_eq!(f.rigid.map(), &[0]);

        // g_N for a realizable N: the rigid part is an isomorphism.
        let r6 = Quandle::dihedral(6);
        for n in realizable_kernels(&r6).unwrap() {
            let oq = orbit_quotient(&r6, &n).unwrap();
            let f = factor_surjection(&oq.projection).unwrap();
            assert_eq!(f.kernel, n);
            assert!(f.rigid.is_bijective());
        }
    }

    #[test]
    fn omega_examples() {
        let q = r3();
        let inn = q.inn().unwrap().clone();
        let triv = PermGroup::trivial(3);
        match omega(&q, &inn, &inn).unwrap() {
            OmegaOutcome::Exists(om) => assert_eq!(om.map(), &[0]),
            other => panic!("{other:?}"),
        }
        match omega(&q, &triv, &inn).unwrap() {
            OmegaOutcome::Exists(om) => assert_eq!(om.map(), &[0, 0, 0]),
            other => panic!("{other:?}"),
        }
        match omega(&q, &inn, &triv).unwrap() {
            OmegaOutcome::NotContained { witness } => {
                assert!(inn.contains(&witness) && !triv.contains(&witness));
            }
            other => panic!("{other:?}"),
        }
        let a3 = generate(3, &[p(3, "(0 1 2)")]).unwrap();
        assert!(matches!(omega(&q, &a3, &inn), Err(Error::NotRealizable { .. })));
    }

    #[test]
    fn closure_is_a_closure_operator_on_small_quandles() {
        for q in [
            r3(),
            Quandle::dihedral(4),
            Quandle::dihedral(6),
            Quandle::alexander(5, 2).unwrap(),
        ] {
            let normals = all_normal_subgroups(q.inn().unwrap()).unwrap();
            let closures: Vec<PermGroup> = normals.iter().map(|n| realizable_closure(&q, n).unwrap()).collect();
            for (n, c) in normals.iter().zip(&closures) {
                assert!(n.is_subgroup_of(c));
                assert_eq!(&realizable_closure(&q, c).unwrap(), c);
            }
            for (i, n) in normals.iter().enumerate() {
                for (j, m) in normals.iter().enumerate() {
                    if n.is_subgroup_of(m) {
                        assert!(closures[i].is_subgroup_of(&closures[j]));
                    }
                }
            }
            let kernels = realizable_kernels(&q).unwrap();
            for a in &kernels {
                for b in &kernels {
                    assert!(is_realizable_kernel(&q, &intersect(a, b).unwrap()).unwrap());
                }
            }
        }
    }
}
