//! OCEAN personality profiles and the closed-form mappings that turn them
//! into per-agent motion factors (collectivity, angular variation, speed)
//! and group cohesion distances.
//!
//! All three trait formulas are rational functions with poles; the guard
//! constants below keep evaluation away from them, and [`derive_traits`]
//! clamps each stage into its working range before feeding the next.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{num, Scalar};
use crate::AgentId;

/// Reject profiles whose collectivity denominator `8N - 100` is closer to
/// zero than this.
pub const DENOM_GUARD: f64 = 1e-6;
/// Lower clamp for collectivity; keeps the `1/(16 phi)` term of the angular
/// variation formula at most 1.
pub const PHI_MIN: f64 = 1.0 / 16.0;
/// Lower clamp for angular variation; guards the `(4 alpha)^-1` pole of the
/// speed formula.
pub const ALPHA_MIN: f64 = 1e-3;

#[derive(Debug, Error, PartialEq)]
pub enum PersonalityError {
    /// An input sits inside the guard band of one of the formula poles.
    #[error("singular input: {0}")]
    SingularInput(&'static str),
    /// A trait or cohesion value is outside its admissible range.
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("group has no members")]
    EmptyGroup,
}

/// Big-five personality profile. Trait values are dimensionless scores in
/// `[0, 100]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OceanProfile<S = f64> {
    #[serde(rename = "O")]
    openness: S,
    #[serde(rename = "C")]
    conscientiousness: S,
    #[serde(rename = "E")]
    extraversion: S,
    #[serde(rename = "A")]
    agreeableness: S,
    #[serde(rename = "N")]
    neuroticism: S,
}

impl<S: Scalar> OceanProfile<S> {
    /// Build a profile, rejecting non-finite values and values outside
    /// `[0, 100]`.
    pub fn new(
        openness: S,
        conscientiousness: S,
        extraversion: S,
        agreeableness: S,
        neuroticism: S,
    ) -> Result<Self, PersonalityError> {
        for (what, v) in [
            ("openness", openness),
            ("conscientiousness", conscientiousness),
            ("extraversion", extraversion),
            ("agreeableness", agreeableness),
            ("neuroticism", neuroticism),
        ] {
            if !v.is_finite() || v < S::zero() || v > num(100.0) {
                return Err(PersonalityError::OutOfRange {
                    what,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(OceanProfile {
            openness,
            conscientiousness,
            extraversion,
            agreeableness,
            neuroticism,
        })
    }

    pub fn openness(&self) -> S {
        self.openness
    }

    pub fn conscientiousness(&self) -> S {
        self.conscientiousness
    }

    pub fn extraversion(&self) -> S {
        self.extraversion
    }

    pub fn agreeableness(&self) -> S {
        self.agreeableness
    }

    pub fn neuroticism(&self) -> S {
        self.neuroticism
    }

    /// German population preset (published big-five country means).
    pub fn germany() -> Self {
        OceanProfile::new(num(56.7), num(46.7), num(47.3), num(49.1), num(52.8))
            .expect("preset is in range")
    }

    /// Hispanic-American population preset, used as the Brazilian stand-in.
    pub fn hispanic_american() -> Self {
        OceanProfile::new(num(51.2), num(51.6), num(47.5), num(47.1), num(49.5))
            .expect("preset is in range")
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for OceanProfile<S> {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw<S> {
            #[serde(rename = "O")]
            o: S,
            #[serde(rename = "C")]
            c: S,
            #[serde(rename = "E")]
            e: S,
            #[serde(rename = "A")]
            a: S,
            #[serde(rename = "N")]
            n: S,
        }
        let raw = Raw::deserialize(deserializer)?;
        OceanProfile::new(raw.o, raw.c, raw.e, raw.a, raw.n)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

/// Derived motion factors of one agent. All three are dimensionless; the
/// simulator turns them into physical speeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentTraits<S = f64> {
    /// Group-cohesion tendency, clamped to `[PHI_MIN, 1]`.
    pub collectivity: S,
    /// Turn-rate factor, clamped to `[ALPHA_MIN, 1]`.
    pub angular_variation: S,
    /// Linear-speed factor, clamped to `[0, 1]`.
    pub speed_factor: S,
}

/// Proxemics anchor distances and the cohesion scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxemicsConstants<S = f64> {
    /// Personal-space radius, meters.
    pub personal_space: S,
    /// Social-space radius, meters.
    pub social_space: S,
    /// Highest cohesion value a group can take.
    pub max_cohesion: S,
}

impl<S: Scalar> Default for ProxemicsConstants<S> {
    fn default() -> Self {
        ProxemicsConstants {
            personal_space: num(1.2),
            social_space: num(3.6),
            max_cohesion: num(3.0),
        }
    }
}

impl<S: Scalar> ProxemicsConstants<S> {
    pub fn new(personal_space: S, social_space: S, max_cohesion: S) -> Result<Self, PersonalityError> {
        let ordered = personal_space.is_finite()
            && social_space.is_finite()
            && personal_space > S::zero()
            && personal_space < social_space;
        if !ordered {
            return Err(PersonalityError::OutOfRange {
                what: "personal_space",
                value: personal_space.to_f64().unwrap_or(f64::NAN),
            });
        }
        if max_cohesion.is_nan() || max_cohesion <= S::zero() {
            return Err(PersonalityError::OutOfRange {
                what: "max_cohesion",
                value: max_cohesion.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(ProxemicsConstants {
            personal_space,
            social_space,
            max_cohesion,
        })
    }
}

/// A named group of agents with its cohesion and the distance it implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec<S = f64> {
    pub member_ids: BTreeSet<AgentId>,
    pub cohesion: S,
    pub cohesion_distance: S,
}

impl<S: Scalar> GroupSpec<S> {
    pub fn new(
        member_ids: BTreeSet<AgentId>,
        cohesion: S,
        constants: &ProxemicsConstants<S>,
    ) -> Result<Self, PersonalityError> {
        if member_ids.is_empty() {
            return Err(PersonalityError::EmptyGroup);
        }
        let cohesion_distance = cohesion_distance(cohesion, constants)?;
        Ok(GroupSpec {
            member_ids,
            cohesion,
            cohesion_distance,
        })
    }
}

/// Raw collectivity:
/// `phi = (2A/100 + 50/(8N - 100) + 2E/100 + 2(1 - N/100)) / 7`.
///
/// Unclamped; [`derive_traits`] applies the `[PHI_MIN, 1]` clamp.
pub fn collectivity<S: Scalar>(profile: &OceanProfile<S>) -> Result<S, PersonalityError> {
    let hundred: S = num(100.0);
    let two: S = num(2.0);
    let denom = num::<S>(8.0) * profile.neuroticism - hundred;
    if denom.abs() < num(DENOM_GUARD) {
        return Err(PersonalityError::SingularInput(
            "collectivity denominator 8N - 100 is inside the guard band",
        ));
    }
    let sum = two * profile.agreeableness / hundred
        + num::<S>(50.0) / denom
        + two * profile.extraversion / hundred
        + two * (S::one() - profile.neuroticism / hundred);
    Ok(sum / num(7.0))
}

/// Raw angular variation:
/// `alpha = (1 - O/100 + 1.208 - 1/(16 phi) - E/100) / 2`.
pub fn angular_variation<S: Scalar>(
    profile: &OceanProfile<S>,
    phi: S,
) -> Result<S, PersonalityError> {
    if phi.is_nan() || phi < num(PHI_MIN) {
        return Err(PersonalityError::SingularInput(
            "collectivity below PHI_MIN in angular variation",
        ));
    }
    let hundred: S = num(100.0);
    let sum = S::one() - profile.openness / hundred + num(1.208)
        - S::one() / (num::<S>(16.0) * phi)
        - profile.extraversion / hundred;
    Ok(sum / num(2.0))
}

/// Raw speed factor:
/// `s = ((0.04 C - (4 alpha)^-1) / 4 + (E/100 - alpha + 1) / 2) / 2`.
pub fn speed_factor<S: Scalar>(
    profile: &OceanProfile<S>,
    alpha: S,
) -> Result<S, PersonalityError> {
    if alpha.is_nan() || alpha < num(ALPHA_MIN) {
        return Err(PersonalityError::SingularInput(
            "angular variation below ALPHA_MIN in speed factor",
        ));
    }
    let hundred: S = num(100.0);
    let four: S = num(4.0);
    let term_a = (num::<S>(0.04) * profile.conscientiousness - (four * alpha).recip()) / four;
    let term_b = (profile.extraversion / hundred - alpha + S::one()) / num(2.0);
    Ok((term_a + term_b) / num(2.0))
}

fn clamp<S: Scalar>(x: S, lo: S, hi: S) -> S {
    x.max(lo).min(hi)
}

/// Chain the three formulas, clamping each stage into its working range:
/// collectivity into `[PHI_MIN, 1]`, angular variation into `[ALPHA_MIN, 1]`,
/// speed into `[0, 1]`.
pub fn derive_traits<S: Scalar>(
    profile: &OceanProfile<S>,
) -> Result<AgentTraits<S>, PersonalityError> {
    let phi = clamp(collectivity(profile)?, num(PHI_MIN), S::one());
    let alpha = clamp(angular_variation(profile, phi)?, num(ALPHA_MIN), S::one());
    let speed = clamp(speed_factor(profile, alpha)?, S::zero(), S::one());
    Ok(AgentTraits {
        collectivity: phi,
        angular_variation: alpha,
        speed_factor: speed,
    })
}

/// Group cohesion: the members' mean collectivity scaled to
/// `[0, max_cohesion]`.
pub fn group_cohesion<S: Scalar>(
    member_phis: &[S],
    constants: &ProxemicsConstants<S>,
) -> Result<S, PersonalityError> {
    if member_phis.is_empty() {
        return Err(PersonalityError::EmptyGroup);
    }
    let n = num::<S>(member_phis.len() as f64);
    let mean = member_phis.iter().copied().sum::<S>() / n;
    Ok(clamp(
        constants.max_cohesion * mean,
        S::zero(),
        constants.max_cohesion,
    ))
}

/// Largest distance a member may stray from its group:
/// `mu = H_s (1 - zeta/zeta_max) + H_p (zeta/zeta_max)`,
/// affine between the social space at zero cohesion and the personal space
/// at maximum cohesion. This arrangement keeps both endpoints exact.
pub fn cohesion_distance<S: Scalar>(
    zeta: S,
    constants: &ProxemicsConstants<S>,
) -> Result<S, PersonalityError> {
    if zeta.is_nan() || zeta < S::zero() || zeta > constants.max_cohesion {
        return Err(PersonalityError::OutOfRange {
            what: "cohesion",
            value: zeta.to_f64().unwrap_or(f64::NAN),
        });
    }
    let t = zeta / constants.max_cohesion;
    Ok(constants.social_space * (S::one() - t) + constants.personal_space * t)
}
