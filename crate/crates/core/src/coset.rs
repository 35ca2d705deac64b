//! Connected quandles as stabilizer cosets.
//!
//! A triple `(G, H, η)` with `η ∈ Z(H)` whose conjugates generate `G` makes
//! the right cosets `H\G` a connected quandle under
//! `Hg ▷ Hγ = H g γ⁻¹ η γ`. Every connected quandle arises this way from
//! `G = Inn(Q)`, `H` the stabilizer of a base point and `η` its symmetry.
//!
//! On rigid quotients `H\G ↠ K\G`: the stabilizer of a point is contained in
//! the stabilizer of its image, so the containment is `H ⊆ K`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permgroup::{
    self, coset_lookup, generate, hom_from_generator_images, quotient_group, right_cosets, Coset, GroupHom,
    HomDefinition, PermGroup, Permutation,
};
use crate::quandle::{check_hom, is_isomorphic, Quandle, QuandleHom};
use crate::quotient::{is_rigid, orbit_quotient, realizable_closure, require_realizable};

#[derive(Clone, Debug)]
pub struct CosetPresentation {
    pub group: PermGroup,
    pub stabilizer: PermGroup,
    pub eta: Permutation,
    /// `H\G`, trivial coset first.
    pub cosets: Vec<Coset>,
    pub base_point: Option<usize>,
    lookup: Vec<usize>,
}

impl CosetPresentation {
    /// Computes the coset list; the quandle invariants are checked by [`Self::check`].
    pub fn new(group: PermGroup, stabilizer: PermGroup, eta: Permutation) -> Result<Self> {
        let cosets = right_cosets(&stabilizer, &group)?;
        let lookup = coset_lookup(&cosets, &group);
        Ok(CosetPresentation {
            group,
            stabilizer,
            eta,
            cosets,
            base_point: None,
            lookup,
        })
    }

    pub fn index(&self) -> usize {
        self.cosets.len()
    }

    /// Index of the coset `Hg`.
    pub fn coset_of(&self, g: &Permutation) -> usize {
        self.lookup[self.group.index_of(g).expect("element of G")]
    }

    pub fn representative(&self, coset: usize) -> &Permutation {
        &self.cosets[coset].representative
    }

    /// `Hg ▷ Hγ = H g γ⁻¹ η γ` on coset indices.
    pub fn operate(&self, a: usize, b: usize) -> usize {
        let g = self.representative(a);
        let gamma = self.representative(b);
        self.coset_of(&g.then(&self.eta.conjugate_by(gamma)))
    }

    /// `η ∈ Z(H)` and `{g⁻¹ηg}` generates `G`; violations carry a witness.
    pub fn check(&self) -> Result<()> {
        if !self.group.contains(&self.eta) {
            return Err(Error::Presentation(format!("η = {} is not in G", self.eta)));
        }
        if !self.stabilizer.contains(&self.eta) {
            return Err(Error::Presentation(format!(
                "η = {} is not in H, so not in Z(H)",
                self.eta
            )));
        }
        if let Some(h) = self
            .stabilizer
            .generators()
            .iter()
            .find(|h| !h.commutes_with(&self.eta))
        {
            return Err(Error::Presentation(format!(
                "η = {} is not central in H: it does not commute with {h}",
                self.eta
            )));
        }
        let span = conjugate_span(&self.group, &self.eta)?;
        if span.order() != self.group.order() {
            let missing = self
                .group
                .elements()
                .iter()
                .find(|g| !span.contains(g))
                .expect("proper subgroup");
            return Err(Error::Presentation(format!(
                "conjugates of η = {} generate a subgroup of order {} < |G| = {}; {missing} is missing",
                self.eta,
                span.order(),
                self.group.order()
            )));
        }
        Ok(())
    }

    /// The right-multiplication action of `G` on `H\G`; its kernel is `N_{H\G}`.
    pub fn action(&self) -> Result<GroupHom> {
        let images: Vec<Permutation> = self
            .group
            .generators()
            .iter()
            .map(|g| self.right_multiplication(g))
            .collect();
        match hom_from_generator_images(&self.group, &images, self.index())? {
            HomDefinition::WellDefined(h) => Ok(h),
            HomDefinition::IllDefined { .. } => Err(Error::internal("right multiplication on cosets is not an action")),
        }
    }

    fn right_multiplication(&self, g: &Permutation) -> Permutation {
        let images = (0..self.index())
            .map(|c| self.coset_of(&self.representative(c).then(g)))
            .collect();
        Permutation::from_images(images).expect("right multiplication permutes cosets")
    }
}

/// The subgroup generated by all conjugates `g⁻¹ x g`, `g ∈ G`.
fn conjugate_span(group: &PermGroup, x: &Permutation) -> Result<PermGroup> {
    let mut conjugates: Vec<Permutation> = group.elements().iter().map(|g| x.conjugate_by(g)).collect();
    conjugates.sort();
    conjugates.dedup();
    generate(group.degree(), &conjugates)
}

/// A presented quandle together with how `G` acts on it.
#[derive(Clone, Debug)]
pub struct CosetQuandle {
    pub quandle: Quandle,
    pub faithful: bool,
    /// `N_{H\G} = { g ∈ G : Hγg = Hγ for all γ }`.
    pub action_kernel: PermGroup,
    pub action: GroupHom,
}

/// Builds the quandle on `H\G` and checks the structure theorem: axioms,
/// connectivity, and `Inn(H\G) ≅ G/N_{H\G}` via the action of `G`.
pub fn from_presentation(p: &CosetPresentation) -> Result<CosetQuandle> {
    p.check()?;
    let n = p.index();
    let mut flat = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            flat[a * n + b] = p.operate(a, b);
        }
    }
    let quandle = Quandle::from_flat(n, &flat).map_err(|e| Error::internal(format!("coset table: {e}")))?;
    if !quandle.is_connected() {
        return Err(Error::internal("coset quandle is not connected"));
    }
    let action = p.action()?;
    let action_kernel = action.kernel().clone();
    let faithful = action_kernel.is_trivial();

    // Inn(H\G) ≅ G/N_{H\G}, realized by the induced action of the quotient.
    let inn = quandle.inn()?;
    let gq = quotient_group(&p.group, &action_kernel)?;
    let images: Vec<Permutation> = p
        .group
        .generators()
        .iter()
        .map(|g| action.apply(g).expect("generator").clone())
        .collect();
    let induced = hom_from_generator_images(&gq.group, &images, n)?
        .well_defined()
        .ok_or_else(|| Error::internal("G/N_{H\\G} does not act on H\\G"))?;
    if !induced.is_injective() || induced.image_group()? != *inn {
        return Err(Error::internal(format!(
            "Inn(H\\G) has order {}, expected |G/N_(H\\G)| = {}",
            inn.order(),
            gq.group.order()
        )));
    }
    if faithful && inn.order() != p.group.order() {
        return Err(Error::internal("faithful presentation but Inn(H\\G) ≠ G"));
    }
    Ok(CosetQuandle {
        quandle,
        faithful,
        action_kernel,
        action,
    })
}

/// Presents a connected quandle at base point `q`: `G = Inn(Q)`, `H = G_q`,
/// `η = S_q`. The identification sends coset `Hg` to `q·g`.
pub fn to_presentation(quandle: &Quandle, base: usize) -> Result<(CosetPresentation, Vec<usize>)> {
    quandle.require_connected()?;
    let eta = quandle.symmetry(base)?;
    let group = quandle.inn()?.clone();
    let stabilizer = permgroup::point_stabilizer(base, &group)?;
    let mut p = CosetPresentation::new(group, stabilizer, eta)?;
    p.base_point = Some(base);
    p.check()
        .map_err(|e| Error::internal(format!("structure theorem fails: {e}")))?;

    let ident: Vec<usize> = p.cosets.iter().map(|c| c.representative.image(base)).collect();
    let mut sorted = ident.clone();
    sorted.sort_unstable();
    if sorted != (0..quandle.size()).collect::<Vec<_>>() {
        return Err(Error::internal("Hg ↦ q·g is not a bijection"));
    }
    for a in 0..p.index() {
        for g in p.group.generators() {
            if ident[p.coset_of(&p.representative(a).then(g))] != g.image(ident[a]) {
                return Err(Error::internal("identification is not equivariant"));
            }
        }
        let rep = p.representative(a);
        if quandle.symmetry_unchecked(ident[a]) != p.eta.conjugate_by(rep) {
            return Err(Error::internal("augmentation of Hg is not g⁻¹ηg"));
        }
        for b in 0..p.index() {
            if quandle.op(ident[a], ident[b]) != ident[p.operate(a, b)] {
                return Err(Error::internal("Hg ▷ Hγ = Hgγ⁻¹ηγ fails"));
            }
        }
    }
    if !p.action()?.is_injective() {
        return Err(Error::internal("Inn(Q) does not act faithfully on H\\G"));
    }
    Ok((p, ident))
}

/// The individual checks made by [`quotient_presentation`].
#[derive(Clone, Debug, Serialize)]
pub struct QuotientPresentationReport {
    pub quotient_order: usize,
    pub stabilizer_order: usize,
    /// `H₁ = HN/N`.
    pub stabilizer_is_hn_over_n: bool,
    /// `|H₁| = ηN`.
    pub augmentation_is_eta_n: bool,
    /// `ηN ∈ Z(H₁)`.
    pub eta_n_central: bool,
    /// `|H₁gN| = g⁻¹ηgN` for every `g`.
    pub conjugate_augmentations: bool,
    /// `{ g⁻¹ηgN }` generates `G/N`.
    pub conjugates_generate: bool,
}

impl QuotientPresentationReport {
    pub fn all_hold(&self) -> bool {
        self.stabilizer_is_hn_over_n
            && self.augmentation_is_eta_n
            && self.eta_n_central
            && self.conjugate_augmentations
            && self.conjugates_generate
    }
}

/// Presentation `(G/N, HN/N, ηN)` of the orbit quotient `(H\G)/N` by a
/// realizable kernel `N ⊴ G`. Requires `G` to act faithfully on `H\G`.
pub fn quotient_presentation(
    p: &CosetPresentation,
    n: &PermGroup,
) -> Result<(CosetPresentation, QuotientPresentationReport)> {
    let cq = from_presentation(p)?;
    if !cq.faithful {
        return Err(Error::Domain("G must act faithfully on H\\G to be Inn(H\\G)".into()));
    }
    if let Some(w) = n.subgroup_witness(&p.group) {
        return Err(Error::NotSubgroup { witness: w.clone() });
    }
    permgroup::require_normal(n, &p.group)?;
    let n_inn = permgroup::image_of(n, |g| cq.action.apply(g).expect("element").clone(), p.index())?;
    require_realizable(&cq.quandle, &n_inn)?;
    let oq = orbit_quotient(&cq.quandle, &n_inn)?;
    let gq = quotient_group(&p.group, n)?;
    let project = |g: &Permutation| gq.project(g).expect("element of G").clone();

    // Action of G on the blocks of Q/N: [Hγ]·g = [Hγg].
    let block_action = |g: &Permutation| -> Permutation {
        let images = oq
            .blocks
            .iter()
            .map(|b| oq.block_of[p.coset_of(&p.representative(b[0]).then(g))])
            .collect();
        Permutation::from_images(images).expect("G permutes blocks")
    };
    for g in p.group.elements() {
        let on_blocks = block_action(g);
        if on_blocks != block_action(gq.lift(&project(g)).expect("lift")) {
            return Err(Error::internal("action of G/N on Q/N is not well defined"));
        }
        if on_blocks.is_identity() != n.contains(g) {
            return Err(Error::internal(
                "G/N does not act faithfully on Q/N although N is realizable",
            ));
        }
    }

    let base_block = oq.block_of[0];
    let h1_elements: Vec<Permutation> = p
        .group
        .elements()
        .iter()
        .filter(|g| block_action(g).image(base_block) == base_block)
        .map(project)
        .collect();
    let h1 = PermGroup::from_closed_set(gq.group.degree(), h1_elements);
    let hn_over_n = gq.project_subgroup(&p.stabilizer)?;
    let eta_n = project(&p.eta);

    let stabilizer_is_hn_over_n = h1 == hn_over_n;
    let augmentation_is_eta_n = block_action(&p.eta) == oq.quotient.symmetry_unchecked(base_block);
    let eta_n_central = h1.contains(&eta_n) && h1.generators().iter().all(|h| h.commutes_with(&eta_n));
    let conjugate_augmentations = p.group.elements().iter().all(|g| {
        let block = oq.block_of[p.coset_of(g)];
        block_action(&p.eta.conjugate_by(g)) == oq.quandle_symmetry(block)
    });
    let conjugates: Vec<Permutation> = p
        .group
        .elements()
        .iter()
        .map(|g| project(&p.eta.conjugate_by(g)))
        .collect();
    let conjugates_generate = generate(gq.group.degree(), &conjugates)?.order() == gq.group.order();

    let report = QuotientPresentationReport {
        quotient_order: gq.group.order(),
        stabilizer_order: h1.order(),
        stabilizer_is_hn_over_n,
        augmentation_is_eta_n,
        eta_n_central,
        conjugate_augmentations,
        conjugates_generate,
    };
    if !report.all_hold() {
        return Err(Error::internal(format!(
            "quotient presentation checks failed: {report:?}"
        )));
    }

    let quotient_p = CosetPresentation::new(gq.group.clone(), h1, eta_n)?;
    let presented = from_presentation(&quotient_p)?;
    let ident: Vec<usize> = (0..quotient_p.index())
        .map(|c| {
            let g = gq.lift(quotient_p.representative(c)).expect("lift");
            block_action(g).image(base_block)
        })
        .collect();
    let iso = check_hom(&ident, &presented.quandle, &oq.quotient)
        .map_err(|e| Error::internal(format!("(G/N, HN/N, ηN) does not present Q/N: {e}")))?;
    if !iso.is_bijective() {
        return Err(Error::internal("(G/N, HN/N, ηN) does not present Q/N"));
    }
    Ok((quotient_p, report))
}

trait BlockSymmetry {
    fn quandle_symmetry(&self, block: usize) -> Permutation;
}

impl BlockSymmetry for crate::quotient::OrbitQuotient {
    fn quandle_symmetry(&self, block: usize) -> Permutation {
        self.quotient.symmetry_unchecked(block)
    }
}

/// Why a candidate rigid quotient `H\G → K\G` was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum RigidRejection {
    /// An element of `H` outside `K`.
    StabilizerNotContained { witness: Permutation },
    /// `η ∉ K`, or an element of `K` not commuting with `η`.
    EtaNotCentral { witness: Permutation },
    /// A non-identity element of `G` acting trivially on `K\G`.
    NotFaithful { witness: Permutation },
}

impl fmt::Display for RigidRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RigidRejection::StabilizerNotContained { witness } => write!(f, "H ⊄ K: {witness} ∈ H \\ K"),
            RigidRejection::EtaNotCentral { witness } => write!(f, "η ∉ Z(K): witness {witness}"),
            RigidRejection::NotFaithful { witness } => write!(f, "G is not faithful on K\\G: {witness} acts trivially"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum RigidOutcome {
    Rigid(QuandleHom),
    Rejected(RigidRejection),
}

fn center_witness(k: &PermGroup, eta: &Permutation) -> Option<Permutation> {
    if !k.contains(eta) {
        return Some(eta.clone());
    }
    k.generators().iter().find(|x| !x.commutes_with(eta)).cloned()
}

/// The map `Hg ↦ Kg`, when it is a rigid quotient of `H\G`.
pub fn rigid_quotient_of_presentation(p: &CosetPresentation, k: &PermGroup) -> Result<RigidOutcome> {
    if let Some(w) = k.subgroup_witness(&p.group) {
        return Err(Error::NotSubgroup { witness: w.clone() });
    }
    if let Some(w) = p.stabilizer.subgroup_witness(k) {
        return Ok(RigidOutcome::Rejected(RigidRejection::StabilizerNotContained {
            witness: w.clone(),
        }));
    }
    if let Some(w) = center_witness(k, &p.eta) {
        return Ok(RigidOutcome::Rejected(RigidRejection::EtaNotCentral { witness: w }));
    }
    let source = from_presentation(p)?;
    let kp = CosetPresentation::new(p.group.clone(), k.clone(), p.eta.clone())?;
    let target = from_presentation(&kp)?;
    if !target.faithful {
        let w = target.action_kernel.elements()[1].clone();
        return Ok(RigidOutcome::Rejected(RigidRejection::NotFaithful { witness: w }));
    }
    let map: Vec<usize> = p.cosets.iter().map(|c| kp.coset_of(&c.representative)).collect();
    let hom = check_hom(&map, &source.quandle, &target.quandle)
        .map_err(|e| Error::internal(format!("Hg ↦ Kg is not a homomorphism: {e}")))?;
    hom.require_surjective()?;
    if !is_rigid(&hom)? {
        return Err(Error::internal("Hg ↦ Kg with faithful action is not rigid"));
    }
    Ok(RigidOutcome::Rigid(hom))
}

/// Result of [`rigid_iff_closure`].
#[derive(Clone, Debug)]
pub struct ClosureCriterion {
    /// `N = N^{K\G}`; equivalently `c_N` is rigid.
    pub rigid: bool,
    /// `N^{K\G}` as a subgroup of `G`.
    pub closure: PermGroup,
    /// An element of `N^{K\G} \ N`, when not rigid.
    pub witness: Option<Permutation>,
    /// `c_N : (H\G)/N → (K\G)/N`.
    pub induced: QuandleHom,
}

/// Decides whether `c_N : (H\G)/N → (K\G)/N` is rigid by testing
/// `N = N^{K\G}`, and confirms the verdict by building `c_N` and testing its
/// rigidity directly.
pub fn rigid_iff_closure(p: &CosetPresentation, k: &PermGroup, n: &PermGroup) -> Result<ClosureCriterion> {
    let c = match rigid_quotient_of_presentation(p, k)? {
        RigidOutcome::Rigid(c) => c,
        RigidOutcome::Rejected(r) => {
            return Err(Error::Domain(format!("H\\G → K\\G is not a rigid quotient: {r}")));
        }
    };
    if let Some(w) = n.subgroup_witness(&p.group) {
        return Err(Error::NotSubgroup { witness: w.clone() });
    }
    permgroup::require_normal(n, &p.group)?;

    let source = from_presentation(p)?;
    let kp = CosetPresentation::new(p.group.clone(), k.clone(), p.eta.clone())?;
    let target = from_presentation(&kp)?;
    let n_h = permgroup::image_of(n, |g| source.action.apply(g).expect("element").clone(), p.index())?;
    let n_k = permgroup::image_of(n, |g| target.action.apply(g).expect("element").clone(), kp.index())?;
    require_realizable(&source.quandle, &n_h)?;

    let closure_k = realizable_closure(&target.quandle, &n_k)?;
    let closure_elements: Vec<Permutation> = p
        .group
        .elements()
        .iter()
        .filter(|g| closure_k.contains(target.action.apply(g).expect("element")))
        .cloned()
        .collect();
    let closure = PermGroup::from_closed_set(p.group.degree(), closure_elements);
    let witness = closure.elements().iter().find(|g| !n.contains(g)).cloned();
    let rigid = witness.is_none();

    let oh = orbit_quotient(&source.quandle, &n_h)?;
    let ok = orbit_quotient(&target.quandle, &n_k)?;
    let mut map = vec![usize::MAX; oh.quotient.size()];
    for x in 0..source.quandle.size() {
        let (a, b) = (oh.block_of[x], ok.block_of[c.apply(x)]);
        if map[a] != usize::MAX && map[a] != b {
            return Err(Error::internal("c_N is not well defined"));
        }
        map[a] = b;
    }
    let induced = check_hom(&map, &oh.quotient, &ok.quotient)
        .map_err(|e| Error::internal(format!("c_N is not a homomorphism: {e}")))?;
    let direct = is_rigid(&induced)?;
    if direct != rigid {
        return Err(Error::internal(format!(
            "closure criterion says rigid = {rigid}, direct check says {direct}"
        )));
    }
    Ok(ClosureCriterion {
        rigid,
        closure,
        witness,
        induced,
    })
}

#[derive(Clone, Debug)]
pub struct PhiMap {
    pub hom: QuandleHom,
    pub rigid: bool,
}

#[derive(Clone, Debug)]
pub enum PhiOutcome {
    Exists(PhiMap),
    /// An element of `K \ L`.
    NotContained {
        witness: Permutation,
    },
}

/// `Φ : K\G → L\G`, `Kg ↦ Lg`, which is a well-defined homomorphism exactly
/// when `K ⊆ L`. Both coset quandles must be valid under `η`.
pub fn phi(g: &PermGroup, k: &PermGroup, l: &PermGroup, eta: &Permutation) -> Result<PhiOutcome> {
    let kp = CosetPresentation::new(g.clone(), k.clone(), eta.clone())?;
    let lp = CosetPresentation::new(g.clone(), l.clone(), eta.clone())?;
    let source = from_presentation(&kp)?;
    let target = from_presentation(&lp)?;
    if let Some(w) = k.subgroup_witness(l) {
        return Ok(PhiOutcome::NotContained { witness: w.clone() });
    }
    let map: Vec<usize> = kp.cosets.iter().map(|c| lp.coset_of(&c.representative)).collect();
    let hom = check_hom(&map, &source.quandle, &target.quandle)
        .map_err(|e| Error::internal(format!("Φ is not a homomorphism although K ⊆ L: {e}")))?;
    hom.require_surjective()?;
    let rigid = is_rigid(&hom)?;
    if target.faithful && !rigid {
        return Err(Error::internal("Φ into a faithful L\\G is not rigid"));
    }
    Ok(PhiOutcome::Exists(PhiMap { hom, rigid }))
}

/// [`phi`] for the rigid quotients `c : H\G → K\G` and `c' : H\G → L\G` of a
/// presentation, additionally checking `Φ ∘ c = c'`.
pub fn phi_over(p: &CosetPresentation, k: &PermGroup, l: &PermGroup) -> Result<PhiOutcome> {
    let rigid = |sub: &PermGroup| -> Result<QuandleHom> {
        match rigid_quotient_of_presentation(p, sub)? {
            RigidOutcome::Rigid(c) => Ok(c),
            RigidOutcome::Rejected(r) => Err(Error::Domain(format!("not a rigid quotient: {r}"))),
        }
    };
    let c = rigid(k)?;
    let c_prime = rigid(l)?;
    let outcome = phi(&p.group, k, l, &p.eta)?;
    if let PhiOutcome::Exists(ref m) = outcome {
        if !m.rigid {
            return Err(Error::internal("Φ between rigid quotients is not rigid"));
        }
        if c.then(&m.hom)?.map() != c_prime.map() {
            return Err(Error::internal("Φ ∘ c != c'"));
        }
    }
    Ok(outcome)
}

/// Whether two presentations give isomorphic quandles.
pub fn presentations_isomorphic(a: &CosetPresentation, b: &CosetPresentation) -> Result<bool> {
    Ok(is_isomorphic(&from_presentation(a)?.quandle, &from_presentation(b)?.quandle).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{all_subgroups, find_group_isomorphism};
    use crate::quotient::realizable_kernels;

    fn p(degree: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, degree).unwrap()
    }

    fn sym3() -> PermGroup {
        generate(3, &[p(3, "(0 1)"), p(3, "(1 2)")]).unwrap()
    }

    #[test]
    fn to_presentation_examples() {
        let (pt, ident) = to_presentation(&Quandle::trivial(1), 0).unwrap();
        assert!(pt.group.is_trivial() && pt.stabilizer.is_trivial() && pt.eta.is_identity());
        assert_eq!(ident, vec![0]);

        let r3 = Quandle::dihedral(3);
        let (pr, ident) = to_presentation(&r3, 0).unwrap();
        assert_eq!(pr.group.order(), 6);
        assert_eq!(pr.stabilizer.elements(), &[Permutation::identity(3), p(3, "(1 2)")]);
        assert_eq!(pr.eta, p(3, "(1 2)"));
        assert_eq!(pr.index(), 3);
        assert_eq!(ident[0], 0);

        let (pr, _) = to_presentation(&r3, 1).unwrap();
        assert_eq!(pr.stabilizer.elements(), &[Permutation::identity(3), p(3, "(0 2)")]);
        assert_eq!(pr.eta, p(3, "(0 2)"));

        assert!(matches!(
            to_presentation(&Quandle::dihedral(4), 0),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn from_presentation_examples() {
        let h = generate(3, &[p(3, "(1 2)")]).unwrap();
        let pres = CosetPresentation::new(sym3(), h, p(3, "(1 2)")).unwrap();
        let cq = from_presentation(&pres).unwrap();
        assert!(cq.faithful);
        assert!(is_isomorphic(&cq.quandle, &Quandle::dihedral(3)).is_some());

        let pres =
            CosetPresentation::new(PermGroup::trivial(1), PermGroup::trivial(1), Permutation::identity(1)).unwrap();
        assert_eq!(from_presentation(&pres).unwrap().quandle.size(), 1);

        let pres = CosetPresentation::new(sym3(), sym3(), Permutation::identity(3)).unwrap();
        assert!(matches!(from_presentation(&pres), Err(Error::Presentation(_))));

        let h = generate(3, &[p(3, "(1 2)")]).unwrap();
        let pres = CosetPresentation::new(sym3(), h, p(3, "(0 1)")).unwrap();
        assert!(matches!(from_presentation(&pres), Err(Error::Presentation(_))));
    }

    #[test]
    fn unfaithful_presentation_has_inn_of_the_quotient() {
        // G = S3 × C3 on 6 points, H = ⟨η⟩ with η = (1 2)(3 4 5). The central
        // C3 lies in H and acts trivially on the three cosets.
        let g = generate(6, &[p(6, "(0 1)"), p(6, "(1 2)"), p(6, "(3 4 5)")]).unwrap();
        let eta = p(6, "(1 2)(3 4 5)");
        let h = generate(6, std::slice::from_ref(&eta)).unwrap();
        let pres = CosetPresentation::new(g.clone(), h, eta).unwrap();
        let cq = from_presentation(&pres).unwrap();
        assert!(!cq.faithful);
        assert_eq!(cq.action_kernel.order(), 3);
        assert!(is_isomorphic(&cq.quandle, &Quandle::dihedral(3)).is_some());
        let quotient = quotient_group(&g, &cq.action_kernel).unwrap();
        let inn = cq.quandle.inn().unwrap();
        assert!(find_group_isomorphism(&quotient.group, inn).unwrap().is_some());
    }

    #[test]
    fn round_trip_and_base_point_independence() {
        for q in [
            Quandle::dihedral(3),
            Quandle::dihedral(5),
            Quandle::alexander(5, 2).unwrap(),
            Quandle::alexander(7, 3).unwrap(),
        ] {
            let mut presented = Vec::new();
            for base in 0..q.size() {
                let (pres, _) = to_presentation(&q, base).unwrap();
                let back = from_presentation(&pres).unwrap();
                assert!(back.faithful);
                assert!(is_isomorphic(&back.quandle, &q).is_some());
                presented.push(pres);
            }
            for pair in presented.windows(2) {
                assert!(presentations_isomorphic(&pair[0], &pair[1]).unwrap());
            }
        }
    }

    #[test]
    fn quotient_presentation_examples() {
        let r3 = Quandle::dihedral(3);
        let (pr, _) = to_presentation(&r3, 0).unwrap();
        let (qp, report) = quotient_presentation(&pr, &PermGroup::trivial(3)).unwrap();
        assert!(report.all_hold());
        assert_eq!(qp.group.order(), 6);
        assert!(presentations_isomorphic(&qp, &pr).unwrap());

        let (qp, report) = quotient_presentation(&pr, &pr.group).unwrap();
        assert!(report.all_hold());
        assert_eq!(qp.group.order(), 1);
        assert_eq!(qp.index(), 1);

        let a3 = generate(3, &[p(3, "(0 1 2)")]).unwrap();
        assert!(matches!(
            quotient_presentation(&pr, &a3),
            Err(Error::NotRealizable { .. })
        ));
    }

    #[test]
    fn quotient_presentation_with_proper_kernel() {
        // Conjugation quandle of the transpositions of S4: Inn = S4 and V4 is a
        // proper realizable kernel; the quotient is R3.
        let s4 = generate(4, &[p(4, "(0 1 2 3)"), p(4, "(0 1)")]).unwrap();
        let (q, _) = crate::quandle::conj_quandle(&s4, &[p(4, "(0 1)")]).unwrap();
        let (pr, _) = to_presentation(&q, 0).unwrap();
        let kernels = realizable_kernels(&q).unwrap();
        let proper: Vec<&PermGroup> = kernels
            .iter()
            .filter(|n| !n.is_trivial() && n.order() < pr.group.order())
            .collect();
        assert!(!proper.is_empty());
        for n in proper {
            let (qp, report) = quotient_presentation(&pr, n).unwrap();
            assert!(report.all_hold());
            assert_eq!(qp.group.order() * n.order(), 24);
        }
    }

    #[test]
    fn rigid_quotient_examples() {
        let r3 = Quandle::dihedral(3);
        let (pr, _) = to_presentation(&r3, 0).unwrap();
        match rigid_quotient_of_presentation(&pr, &pr.stabilizer).unwrap() {
            RigidOutcome::Rigid(c) => assert_eq!(c.map(), &[0, 1, 2]),
            other => panic!("{other:?}"),
        }
        match rigid_quotient_of_presentation(&pr, &pr.group).unwrap() {
            RigidOutcome::Rejected(RigidRejection::EtaNotCentral { .. }) => {}
            other => panic!("{other:?}"),
        }
        let outside = generate(3, &[p(3, "(0 1)")]).unwrap();
        match rigid_quotient_of_presentation(&pr, &outside).unwrap() {
            RigidOutcome::Rejected(RigidRejection::StabilizerNotContained { .. }) => {}
            other => panic!("{other:?}"),
        }
        let foreign = generate(4, &[p(4, "(0 1)")]).unwrap();
        assert!(rigid_quotient_of_presentation(&pr, &foreign).is_err());
    }

    /// `G = S4`, `H = ⟨(0 1)⟩`, `η = (0 1)`: twelve points over the six
    /// transpositions, which are the cosets of `K = ⟨(0 1), (2 3)⟩`.
    fn transposition_cover() -> (CosetPresentation, PermGroup) {
        let s4 = generate(4, &[p(4, "(0 1 2 3)"), p(4, "(0 1)")]).unwrap();
        let h = generate(4, &[p(4, "(0 1)")]).unwrap();
        let k = generate(4, &[p(4, "(0 1)"), p(4, "(2 3)")]).unwrap();
        (CosetPresentation::new(s4, h, p(4, "(0 1)")).unwrap(), k)
    }

    /// Every subgroup strictly above the stabilizer giving a rigid quotient.
    fn proper_rigid_quotients(pr: &CosetPresentation) -> Vec<(PermGroup, QuandleHom)> {
        let mut out = Vec::new();
        for k in all_subgroups(&pr.group).unwrap() {
            if k == pr.stabilizer || !pr.stabilizer.is_subgroup_of(&k) {
                continue;
            }
            if let RigidOutcome::Rigid(c) = rigid_quotient_of_presentation(pr, &k).unwrap() {
                out.push((k, c));
            }
        }
        out
    }

    #[test]
    fn proper_rigid_quotient_of_a_cover() {
        let (pr, k) = transposition_cover();
        let cq = from_presentation(&pr).unwrap();
        assert_eq!(cq.quandle.size(), 12);
        assert!(cq.faithful);
        let found = proper_rigid_quotients(&pr);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].0, k);
        let c = &found[0].1;
        assert!(is_rigid(c).unwrap());
        assert_eq!(c.target().size(), 6);
        let s4 = generate(4, &[p(4, "(0 1 2 3)"), p(4, "(0 1)")]).unwrap();
        let (transpositions, _) = crate::quandle::conj_quandle(&s4, &[p(4, "(0 1)")]).unwrap();
        assert!(is_isomorphic(c.target(), &transpositions).is_some());
    }

    #[test]
    fn closure_criterion_examples() {
        let r3 = Quandle::dihedral(3);
        let (pr, _) = to_presentation(&r3, 0).unwrap();
        let crit = rigid_iff_closure(&pr, &pr.stabilizer, &pr.group).unwrap();
        assert!(crit.rigid);
        let crit = rigid_iff_closure(&pr, &pr.stabilizer, &PermGroup::trivial(3)).unwrap();
        assert!(crit.rigid);

        let (pr, k) = transposition_cover();
        let q = from_presentation(&pr).unwrap().quandle;
        for n in realizable_kernels(&q).unwrap() {
            // G acts faithfully, so kernels in Inn(Q) pull back along the action.
            let action = pr.action().unwrap();
            let pulled: Vec<Permutation> = pr
                .group
                .elements()
                .iter()
                .filter(|g| n.contains(action.apply(g).unwrap()))
                .cloned()
                .collect();
            let n_g = PermGroup::from_closed_set(4, pulled);
            let crit = rigid_iff_closure(&pr, &k, &n_g).unwrap();
            assert!(n_g.is_subgroup_of(&crit.closure));
            assert_eq!(crit.rigid, crit.witness.is_none());
            if let Some(w) = &crit.witness {
                assert!(crit.closure.contains(w) && !n_g.contains(w));
            }
        }
    }

    #[test]
    fn phi_examples() {
        let r3 = Quandle::dihedral(3);
        let (pr, _) = to_presentation(&r3, 0).unwrap();
        match phi(&pr.group, &pr.stabilizer, &pr.stabilizer, &pr.eta).unwrap() {
            PhiOutcome::Exists(m) => {
                assert_eq!(m.hom.map(), &[0, 1, 2]);
                assert!(m.rigid);
            }
            other => panic!("{other:?}"),
        }
        // η = (1 2) is not in the trivial subgroup, so 1\G is not a valid coset quandle.
        let c2 = generate(3, &[p(3, "(1 2)")]).unwrap();
        assert!(matches!(
            phi(&sym3(), &PermGroup::trivial(3), &c2, &p(3, "(1 2)")),
            Err(Error::Presentation(_))
        ));

        let (pr, k) = transposition_cover();
        let pres = &pr;
        let k = &k;
        match phi_over(pres, &pres.stabilizer, k).unwrap() {
            PhiOutcome::Exists(m) => assert!(m.rigid),
            other => panic!("{other:?}"),
        }
        match phi_over(pres, k, &pres.stabilizer).unwrap() {
            PhiOutcome::NotContained { witness } => {
                assert!(k.contains(&witness) && !pres.stabilizer.contains(&witness));
            }
            other => panic!("{other:?}"),
        }
    }
}
