//! Serde wire forms shared by the certificate, witness and report types.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::subgroup::Subgroup;
use crate::subset::GroupSubset;

/// An element as its coordinate vector.
pub type ElementWire = Vec<u32>;

/// A set as its canonically sorted list of coordinate vectors.
pub type SetWire = Vec<Vec<u32>>;

pub(crate) fn elem(g: &FiniteAbelianGroup, x: GroupElement) -> ElementWire {
    g.coords(x)
}

pub(crate) fn set(s: &GroupSubset) -> SetWire {
    s.coords()
}

pub(crate) fn sub(h: &Subgroup) -> SetWire {
    h.as_set().coords()
}

pub(crate) fn parse_elem(g: &FiniteAbelianGroup, w: &[u32]) -> Result<GroupElement> {
    g.element(w)
}

pub(crate) fn parse_set(g: &FiniteAbelianGroup, w: &SetWire) -> Result<GroupSubset> {
    GroupSubset::from_coords(g, w)
}

pub(crate) fn parse_subgroup(g: &FiniteAbelianGroup, w: &SetWire) -> Result<Subgroup> {
    Subgroup::from_subset(&parse_set(g, w)?)
}

/// Exact rational as `{"num":..,"den":..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalWire {
    pub num: i64,
    pub den: i64,
}

impl From<num_rational::Ratio<i64>> for RationalWire {
    fn from(r: num_rational::Ratio<i64>) -> Self {
        RationalWire {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

pub(crate) fn from_value<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse {
        token: v.to_string(),
        reason: e.to_string(),
    })
}
