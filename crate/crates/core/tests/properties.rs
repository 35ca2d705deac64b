use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::{select, Index};

use qfactor::catalog::{self, canonical_form, connected_surjections};
use qfactor::factorize::factor_structural;
use qfactor::permgroup::all_normal_subgroups;
use qfactor::quandle::check_hom;
use qfactor::quotient::{realizable_closure, realizable_kernels};
use qfactor::{Quandle, QuandleHom};

fn catalog() -> &'static [Quandle] {
    static CATALOG: OnceLock<Vec<Quandle>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        catalog::connected_catalog(7)
            .unwrap()
            .into_iter()
            .map(|r| r.quandle)
            .collect()
    })
}

fn quandle() -> impl Strategy<Value = Quandle> {
    select(catalog().to_vec())
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn relabeled() -> impl Strategy<Value = (Quandle, Vec<usize>)> {
    quandle().prop_flat_map(|q| {
        let n = q.size();
        (Just(q), shuffled(n))
    })
}

/// Follows `h` by a random relabeling of its target.
fn retarget(h: &QuandleHom, labels: &[usize]) -> QuandleHom {
    let target = h.target().relabel(labels).unwrap();
    let iso = check_hom(labels, h.target(), &target).unwrap();
    h.then(&iso).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeling_preserves_invariants((q, labels) in relabeled()) {
        let r = q.relabel(&labels).unwrap();
        prop_assert!(check_hom(&labels, &q, &r).is_ok());
        prop_assert_eq!(q.inn().unwrap().order(), r.inn().unwrap().order());
        prop_assert_eq!(realizable_kernels(&q).unwrap().len(), realizable_kernels(&r).unwrap().len());
        prop_assert_eq!(canonical_form(&q).unwrap().0, canonical_form(&r).unwrap().0);
    }

    #[test]
    fn factoring_ignores_target_labels(q in quandle(), i in any::<Index>(), j in any::<Index>(), seed in any::<u64>()) {
        let maps = connected_surjections(&q).unwrap();
        let (g, h) = (i.get(&maps), j.get(&maps));
        let m = h.target().size();
        let labels: Vec<usize> = (0..m).map(|x| (x + seed as usize) % m).collect();
        let moved = retarget(h, &labels);
        let before = factor_structural(g, h).unwrap();
        let after = factor_structural(g, &moved).unwrap();
        prop_assert_eq!(before.exists, after.exists);
        if let (Some(phi), Some(psi)) = (before.phi, after.phi) {
            for (x, &y) in labels.iter().enumerate() {
                prop_assert_eq!(psi.apply(y), phi.apply(x));
            }
        }
    }

    #[test]
    fn closure_is_extensive_and_idempotent(q in quandle(), i in any::<Index>()) {
        let normals = all_normal_subgroups(q.inn().unwrap()).unwrap();
        let n = i.get(&normals);
        let closed = realizable_closure(&q, n).unwrap();
        prop_assert!(n.is_subgroup_of(&closed));
        prop_assert_eq!(&realizable_closure(&q, &closed).unwrap(), &closed);
    }
}
