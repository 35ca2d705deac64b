//! The augmentation `q ↦ S_q` and the functor `Inn` on surjections.

use crate::error::{Error, Result};
use crate::permgroup::{hom_from_generator_images, GroupHom, HomDefinition, PermGroup, Permutation};
use crate::quandle::{Quandle, QuandleHom};

/// `(Q, Inn(Q), q ↦ S_q)`.
#[derive(Clone, Debug)]
pub struct AugmentedQuandle {
    pub quandle: Quandle,
    pub group: PermGroup,
    pub augmentation: Vec<Permutation>,
}

pub fn augmented(q: &Quandle) -> Result<AugmentedQuandle> {
    Ok(AugmentedQuandle {
        quandle: q.clone(),
        group: q.inn()?.clone(),
        augmentation: q.symmetries(),
    })
}

/// `Inn(h) : Inn(Q) → Inn(R)`, determined on generators by `S_q ↦ S_{h(q)}`.
///
/// Only surjections induce a homomorphism this way. Well-definedness is
/// re-checked on every defining product; a failure is an internal error.
pub fn induced_inn_hom(h: &QuandleHom) -> Result<GroupHom> {
    if let Some(missing) = h.surjectivity_witness() {
        return Err(Error::Domain(format!(
            "Inn is functorial only on surjections; {missing} has no preimage"
        )));
    }
    let source = h.source().inn()?;
    let images: Vec<Permutation> = (0..h.source().size())
        .map(|q| h.target().symmetry_unchecked(h.apply(q)))
        .collect();
    match hom_from_generator_images(source, &images, h.target().size())? {
        HomDefinition::WellDefined(hom) => Ok(hom),
        HomDefinition::IllDefined { element, generator } => Err(Error::internal(format!(
            "S_q ↦ S_h(q) is ill-defined at {element} · S_{generator}"
        ))),
    }
}
