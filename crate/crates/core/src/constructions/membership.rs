use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::{GroupElement, GroupSpec};
use crate::ratio::Ratio;
use crate::set::FiniteSet;

type Predicate = Arc<dyn Fn(&GroupElement) -> bool + Send + Sync>;

/// An infinite set given by a decidable membership test.
#[derive(Clone)]
pub struct MembershipSet {
    name: String,
    spec: GroupSpec,
    predicate: Predicate,
    pub paired_folner: FolnerSequence,
    pub predicted_density: Option<Ratio>,
    pub predicted_alpha: Option<Ratio>,
    /// Short description of where the set comes from.
    pub provenance: String,
}

impl MembershipSet {
    pub fn new(
        name: &str,
        paired_folner: FolnerSequence,
        predicate: impl Fn(&GroupElement) -> bool + Send + Sync + 'static,
    ) -> Self {
        MembershipSet {
            name: name.to_string(),
            spec: *paired_folner.spec(),
            predicate: Arc::new(predicate),
            paired_folner,
            predicted_density: None,
            predicted_alpha: None,
            provenance: String::new(),
        }
    }

    /// Membership by lookup in a finite set.
    pub fn finite(name: &str, paired_folner: FolnerSequence, members: FiniteSet) -> Result<Self> {
        if members.spec() != paired_folner.spec() {
            return Err(Error::SpecMismatch {
                expected: paired_folner.spec().to_string(),
                found: members.spec().to_string(),
            });
        }
        Ok(Self::new(name, paired_folner, move |g| members.contains(g)))
    }

    pub fn with_prediction(mut self, density: Option<Ratio>, alpha: Option<Ratio>) -> Self {
        self.predicted_density = density;
        self.predicted_alpha = alpha;
        self
    }

    pub fn with_provenance(mut self, provenance: &str) -> Self {
        self.provenance = provenance.to_string();
        self
    }

    pub fn with_folner(mut self, folner: FolnerSequence) -> Result<Self> {
        if *folner.spec() != self.spec {
            return Err(Error::SpecMismatch {
                expected: self.spec.to_string(),
                found: folner.spec().to_string(),
            });
        }
        self.paired_folner = folner;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        (self.predicate)(g)
    }

    /// `A ∩ S`.
    pub fn restrict(&self, s: &FiniteSet) -> FiniteSet {
        s.filter(|g| self.contains(g))
    }

    /// `A ∩ 2G`.
    pub fn even_part(&self) -> MembershipSet {
        let (a, spec) = (self.clone(), self.spec);
        MembershipSet::new(
            &format!("{} ∩ 2G", self.name),
            self.paired_folner.clone(),
            move |g| spec.in_two_g(g) && a.contains(g),
        )
    }

    /// `A ∪ B`.
    pub fn union(&self, other: &MembershipSet) -> Result<MembershipSet> {
        self.same_spec(other)?;
        let (a, b) = (self.clone(), other.clone());
        Ok(MembershipSet::new(
            &format!("{} ∪ {}", self.name, other.name),
            self.paired_folner.clone(),
            move |g| a.contains(g) || b.contains(g),
        ))
    }

    /// `t + A`.
    pub fn translate(&self, t: &GroupElement) -> Result<MembershipSet> {
        self.spec.validate(t)?;
        let (a, spec, t) = (self.clone(), self.spec, t.clone());
        let name = format!("{} + {}", spec.format_element(&t), self.name);
        Ok(MembershipSet::new(
            &name,
            self.paired_folner.clone(),
            move |g| a.contains(&spec.sub(g, &t).expect("same group")),
        ))
    }

    fn same_spec(&self, other: &MembershipSet) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                expected: self.spec.to_string(),
                found: other.spec.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for MembershipSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MembershipSet")
            .field("name", &self.name)
            .field("spec", &self.spec.to_string())
            .field("paired_folner", &self.paired_folner.to_string())
            .field(
                "predicted_density",
                &self.predicted_density.as_ref().map(ToString::to_string),
            )
            .finish()
    }
}

/// `G ∖ 2G`.
pub fn odd_coset_example(spec: GroupSpec) -> Result<MembershipSet> {
    if spec.ell() < 2 {
        return Err(Error::Unsupported(format!("G ∖ 2G is empty in {spec}")));
    }
    let folner = FolnerSequence::natural(spec);
    let ell = spec.ell();
    Ok(
        MembershipSet::new("odd_coset", folner, move |g| !spec.in_two_g(g))
            .with_prediction(Some(crate::ratio::ratio(ell - 1, ell)), None)
            .with_provenance("complement of the doubles"),
    )
}
