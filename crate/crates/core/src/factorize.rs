//! Deciding whether a surjection `g : Q ↠ R₂` factors through `h : Q ↠ R₁`,
//! i.e. whether some `φ : R₁ → R₂` has `g = φ ∘ h`.
//!
//! [`factor_structural`] runs the group-theoretic pipeline:
//!
//! 1. split `h = f₁ ∘ g_{N₁}` and `g = f₂ ∘ g_{N₂}` with `f₁`, `f₂` rigid;
//! 2. `Ω : Q/N₁ → Q/N₂` exists iff `N₁ ⊆ N₂`;
//! 3. with `Q₁ = Q/N₁ = H\G'` and `b = f₂ ∘ Ω`, the kernel `N = ker Inn(b)`
//!    must be realizable on `R₁ = K\G'` (`N = N^{K\G'}`), and the stabilizers
//!    of matched base points must satisfy `K/N ⊆ L` in `G'/N`, where `L` is
//!    the stabilizer of `b(base)`;
//! 4. `φ` is `R₁ ↠ R₁/N` followed by `Φ : (K/N)\G'' → (L/N)\G''`, `G'' = G'/N`.
//!
//! [`factor_oracle`] decides the same question pointwise.

use std::fmt;

use serde::Serialize;

use crate::augment::induced_inn_hom;
use crate::coset::{phi, rigid_iff_closure, to_presentation, CosetPresentation, PhiOutcome};
use crate::error::{Error, Result};
use crate::permgroup::{quotient_group, PermGroup, Permutation};
use crate::quandle::{check_hom, Quandle, QuandleHom};
use crate::quotient::{factor_surjection, omega, OmegaOutcome};

/// Why `g` does not factor through `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum FactorFailure {
    /// `w ∈ ker Inn(h) \ ker Inn(g)`, as an element of `Inn(Q)`.
    KernelNotContained { witness: Permutation },
    /// `w ∈ N^{K\G'} \ N`, as an element of `G' = Inn(Q/N₁)`.
    ClosureMismatch { witness: Permutation },
    /// `w ∈ G'` fixing `f₁(base)` whose image under `b` moves `b(base)`.
    StabilizerNotContained { witness: Permutation },
}

impl FactorFailure {
    pub fn name(&self) -> &'static str {
        match self {
            FactorFailure::KernelNotContained { .. } => "KernelNotContained",
            FactorFailure::ClosureMismatch { .. } => "ClosureMismatch",
            FactorFailure::StabilizerNotContained { .. } => "StabilizerNotContained",
        }
    }

    pub fn witness(&self) -> &Permutation {
        match self {
            FactorFailure::KernelNotContained { witness }
            | FactorFailure::ClosureMismatch { witness }
            | FactorFailure::StabilizerNotContained { witness } => witness,
        }
    }
}

impl fmt::Display for FactorFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorFailure::KernelNotContained { witness } => {
                write!(
                    f,
                    "ker Inn(h) ⊄ ker Inn(g): {witness} acts trivially on R₁ but not on R₂"
                )
            }
            FactorFailure::ClosureMismatch { witness } => {
                write!(f, "N ≠ N^(K\\G'): {witness} lies in the closure but not in N")
            }
            FactorFailure::StabilizerNotContained { witness } => {
                write!(
                    f,
                    "K/N ⊄ L: {witness} fixes the base point in R₁ but moves its image in R₂"
                )
            }
        }
    }
}

/// Step 3 data, in `G' = Inn(Q/N₁)` on the points of `Q/N₁`.
#[derive(Clone, Debug)]
pub struct RigidStep {
    /// Base point of `Q/N₁`.
    pub base: usize,
    pub presentation: CosetPresentation,
    /// `N = ker Inn(f₂ ∘ Ω)`.
    pub kernel: PermGroup,
    /// `N^{K\G'}`.
    pub closure: PermGroup,
    /// Stabilizer of `f₁(base)`.
    pub k: PermGroup,
    /// Stabilizer of `(f₂ ∘ Ω)(base)`; contains `N`.
    pub l: PermGroup,
    /// `|G'/N|`.
    pub quotient_order: usize,
    /// `Φ` on coset indices, when `K/N ⊆ L/N`.
    pub phi_cosets: Option<Vec<usize>>,
}

/// Every intermediate of [`factor_structural`] that was reached.
#[derive(Clone, Debug)]
pub struct Pipeline {
    /// Base point of `Q`.
    pub base: usize,
    pub n1: PermGroup,
    pub n2: PermGroup,
    pub q1: Quandle,
    pub q2: Quandle,
    pub rigid_h: QuandleHom,
    pub rigid_g: QuandleHom,
    pub omega: Option<QuandleHom>,
    pub rigid_step: Option<RigidStep>,
}

#[derive(Clone, Debug)]
pub struct FactorizationCertificate {
    pub exists: bool,
    pub phi: Option<QuandleHom>,
    pub pipeline: Pipeline,
    pub failure: Option<FactorFailure>,
}

impl FactorizationCertificate {
    /// One line per pipeline step, for display.
    pub fn trace(&self) -> Vec<String> {
        let p = &self.pipeline;
        let mut lines = vec![
            format!("base point q = {}", p.base),
            format!(
                "step 1: |N1| = {}, |Q/N1| = {}; |N2| = {}, |Q/N2| = {}",
                p.n1.order(),
                p.q1.size(),
                p.n2.order(),
                p.q2.size()
            ),
        ];
        match (&p.omega, &self.failure) {
            (Some(_), _) => lines.push("step 2: N1 ⊆ N2, Ω exists".into()),
            (None, Some(f)) => lines.push(format!("step 2: {f}")),
            (None, None) => {}
        }
        if let Some(s) = &p.rigid_step {
            lines.push(format!(
                "step 3: |G'| = {}, |N| = {}, |N^(K\\G')| = {}",
                s.presentation.group.order(),
                s.kernel.order(),
                s.closure.order()
            ));
            if s.closure == s.kernel {
                lines.push(format!(
                    "step 3: |K| = {}, |L| = {}, |G'/N| = {}, K/N ⊆ L: {}",
                    s.k.order(),
                    s.l.order(),
                    s.quotient_order,
                    s.phi_cosets.is_some()
                ));
            }
        }
        if let (Some(_), Some(f)) = (&p.rigid_step, &self.failure) {
            lines.push(format!("failed: {f}"));
        }
        if let Some(phi) = &self.phi {
            lines.push(format!("φ = {:?}", phi.map()));
        }
        lines
    }
}

fn require_same_source(g: &QuandleHom, h: &QuandleHom) -> Result<()> {
    if g.source() != h.source() {
        return Err(Error::DifferentSources);
    }
    g.require_surjective()?;
    h.require_surjective()
}

/// Outcome of [`factor_oracle`].
#[derive(Clone, Debug)]
pub enum OracleOutcome {
    Factors(QuandleHom),
    /// `h(first) = h(second)` but `g(first) ≠ g(second)`.
    Separates {
        first: usize,
        second: usize,
    },
}

impl OracleOutcome {
    pub fn phi(&self) -> Option<&QuandleHom> {
        match self {
            OracleOutcome::Factors(phi) => Some(phi),
            OracleOutcome::Separates { .. } => None,
        }
    }
}

/// `φ` exists iff `h(q) = h(q′)` implies `g(q) = g(q′)`; it is `φ(h(q)) = g(q)`.
pub fn factor_oracle(g: &QuandleHom, h: &QuandleHom) -> Result<OracleOutcome> {
    require_same_source(g, h)?;
    let mut map = vec![usize::MAX; h.target().size()];
    let mut first = vec![usize::MAX; h.target().size()];
    for q in 0..g.source().size() {
        let r = h.apply(q);
        if map[r] == usize::MAX {
            map[r] = g.apply(q);
            first[r] = q;
        } else if map[r] != g.apply(q) {
            return Ok(OracleOutcome::Separates {
                first: first[r],
                second: q,
            });
        }
    }
    let phi = check_hom(&map, h.target(), g.target())
        .map_err(|e| Error::internal(format!("pointwise φ is not a homomorphism: {e}")))?;
    Ok(OracleOutcome::Factors(phi))
}

/// Decides factorization of `g` through `h` by the structural pipeline,
/// using `0` as the base point of `Q`.
pub fn factor_structural(g: &QuandleHom, h: &QuandleHom) -> Result<FactorizationCertificate> {
    require_same_source(g, h)?;
    let q = h.source();
    q.require_connected()?;
    h.target().require_connected()?;
    g.target().require_connected()?;
    let base = 0;

    // Step 1.
    let split_h = factor_surjection(h)?;
    let split_g = factor_surjection(g)?;
    let mut pipeline = Pipeline {
        base,
        n1: split_h.kernel.clone(),
        n2: split_g.kernel.clone(),
        q1: split_h.orbit.quotient.clone(),
        q2: split_g.orbit.quotient.clone(),
        rigid_h: split_h.rigid.clone(),
        rigid_g: split_g.rigid.clone(),
        omega: None,
        rigid_step: None,
    };
    let fail = |pipeline, failure| FactorizationCertificate {
        exists: false,
        phi: None,
        pipeline,
        failure: Some(failure),
    };

    // Step 2.
    let om = match omega(q, &split_h.kernel, &split_g.kernel)? {
        OmegaOutcome::Exists(om) => om,
        OmegaOutcome::NotContained { witness } => {
            return Ok(fail(pipeline, FactorFailure::KernelNotContained { witness }));
        }
    };
    pipeline.omega = Some(om.clone());

    // Step 3: φ ∘ f₁ = b on Q₁ = Q/N₁ with f₁ rigid.
    let f1 = &split_h.rigid;
    let b = om.then(&split_g.rigid)?;
    let q1 = f1.source();
    let base1 = split_h.orbit.block_of[base];
    let (pres, _) = to_presentation(q1, base1)?;
    let kernel = induced_inn_hom(&b)?.kernel().clone();
    let fixing = |map: &QuandleHom| -> PermGroup {
        let target = map.apply(base1);
        let elements = pres
            .group
            .elements()
            .iter()
            .filter(|x| map.apply(x.image(base1)) == target)
            .cloned()
            .collect();
        PermGroup::from_closed_set(pres.group.degree(), elements)
    };
    let k = fixing(f1);
    let l = fixing(&b);
    let criterion = rigid_iff_closure(&pres, &k, &kernel)?;
    let mut step = RigidStep {
        base: base1,
        presentation: pres.clone(),
        kernel: kernel.clone(),
        closure: criterion.closure.clone(),
        k: k.clone(),
        l: l.clone(),
        quotient_order: pres.group.order() / kernel.order(),
        phi_cosets: None,
    };
    if let Some(witness) = criterion.witness {
        pipeline.rigid_step = Some(step);
        return Ok(fail(pipeline, FactorFailure::ClosureMismatch { witness }));
    }

    let gq = quotient_group(&pres.group, &kernel)?;
    let k1 = gq.project_subgroup(&k)?;
    let l1 = gq.project_subgroup(&l)?;
    let eta = gq.project(&pres.eta).expect("η ∈ G'").clone();
    let outcome = phi(&gq.group, &k1, &l1, &eta)?;
    let phi_map = match outcome {
        PhiOutcome::Exists(m) => m.hom,
        PhiOutcome::NotContained { witness } => {
            let lifted = k
                .elements()
                .iter()
                .find(|x| gq.project(x) == Some(&witness))
                .expect("witness lies in K/N")
                .clone();
            pipeline.rigid_step = Some(step);
            return Ok(fail(
                pipeline,
                FactorFailure::StabilizerNotContained { witness: lifted },
            ));
        }
    };

    // Step 4: φ(f₁(base·x)) = b(base·x), routed through Φ : (K/N)π(x) ↦ (L/N)π(x).
    // The cosets of K/N are the points of R₁/N, so several points of R₁ share one.
    let k_cosets = CosetPresentation::new(gq.group.clone(), k1, eta.clone())?;
    let l_cosets = CosetPresentation::new(gq.group.clone(), l1, eta)?;
    let mut coset_of_r1 = vec![usize::MAX; h.target().size()];
    for x in pres.group.elements() {
        let r = f1.apply(x.image(base1));
        let c = k_cosets.coset_of(gq.project(x).expect("x ∈ G'"));
        if coset_of_r1[r] != usize::MAX && coset_of_r1[r] != c {
            return Err(Error::internal("R₁ → K/N\\G'' is not well defined"));
        }
        coset_of_r1[r] = c;
    }
    if coset_of_r1.contains(&usize::MAX) {
        return Err(Error::internal("K\\G' does not cover R₁"));
    }
    let point = |c: usize| -> usize {
        let x = gq.lift(l_cosets.representative(c)).expect("lift");
        b.apply(x.image(base1))
    };
    let map: Vec<usize> = coset_of_r1.iter().map(|&c| point(phi_map.apply(c))).collect();
    let phi_hom = check_hom(&map, h.target(), g.target())
        .map_err(|e| Error::internal(format!("assembled φ is not a homomorphism: {e}")))?;
    if h.then(&phi_hom)?.map() != g.map() {
        return Err(Error::internal("assembled φ does not satisfy φ ∘ h = g"));
    }
    phi_hom.require_surjective()?;
    step.phi_cosets = Some(phi_map.map().to_vec());
    pipeline.rigid_step = Some(step);
    Ok(FactorizationCertificate {
        exists: true,
        phi: Some(phi_hom),
        pipeline,
        failure: None,
    })
}

/// Both verdicts, once they are known to agree.
#[derive(Clone, Debug)]
pub struct AgreementReport {
    pub exists: bool,
    pub phi: Option<QuandleHom>,
    pub failure: Option<FactorFailure>,
    pub certificate: FactorizationCertificate,
}

/// Runs both deciders and fails with a divergence report unless they agree
/// on existence and, when `φ` exists, on the map itself.
pub fn check_agreement(g: &QuandleHom, h: &QuandleHom) -> Result<AgreementReport> {
    let oracle = factor_oracle(g, h)?;
    let cert = factor_structural(g, h)?;
    let divergence = |what: String| {
        Error::internal(format!(
            "factorization deciders disagree: {what}; g = {:?}, h = {:?}, trace: {}",
            g.map(),
            h.map(),
            cert.trace().join(" | ")
        ))
    };
    match (oracle.phi(), &cert.phi) {
        (Some(a), Some(b)) if a.map() != b.map() => {
            return Err(divergence(format!(
                "oracle φ = {:?}, structural φ = {:?}",
                a.map(),
                b.map()
            )));
        }
        (Some(_), None) => return Err(divergence("only the oracle finds φ".into())),
        (None, Some(_)) => return Err(divergence("only the pipeline finds φ".into())),
        _ => {}
    }
    Ok(AgreementReport {
        exists: cert.exists,
        phi: cert.phi.clone(),
        failure: cert.failure.clone(),
        certificate: cert,
    })
}
