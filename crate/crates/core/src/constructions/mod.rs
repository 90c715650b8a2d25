//! Catalog of height functions and cone polynomials, addressed by [`FamilySpec`].

mod cones;
mod heights;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::exactpoly::{PolyError, Polynomial};
use crate::scalarfield::ScalarField;

pub use cones::{
    clifford_cone, clifford_quadric, lawson_cone_r4, product_arg_cone, quintic_cone_4n2,
    re_im_complex_power, t1, t2, tan_multiple_rational, tkachev_cubic, tkachev_power_cone,
};
pub use heights::{
    arctan_split, ch_height, graph_split, helicoid_height, multi_screw_height, pair_angle,
    rotational_pairs, superpose, tan_graph_height, SuperposeBlock,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("gcd of k = {k:?} is {gcd}, must be 1")]
    GcdViolation { k: Vec<u32>, gcd: u32 },
    #[error("superposition blocks {first:?} and {second:?} overlap")]
    OverlappingBlocks { first: Range<usize>, second: Range<usize> },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Helicoid,
    ChFunction,
    Superposition,
    LawsonR4,
    TkachevCubic,
    TkachevPower,
    #[serde(rename = "quintic_4n2")]
    Quintic4n2,
    ProductArg,
    Clifford,
    GraphSplit,
    ArctanSplit,
}

/// Which FamilySpec fields a family reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    N,
    Order,
    K,
    Mu,
    Lambda,
}

impl Param {
    pub fn flag(self) -> &'static str {
        match self {
            Param::N => "n",
            Param::Order => "N",
            Param::K => "k",
            Param::Mu => "mu",
            Param::Lambda => "lambda",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Height function whose graph is the surface.
    Height,
    /// Homogeneous polynomial whose zero set is the cone.
    Cone,
    /// Transcendental function whose zero set is the surface.
    Level,
}

pub struct FamilyInfo {
    pub family: Family,
    pub kind: Kind,
    pub source: &'static str,
    pub params: &'static [Param],
    pub ambient_dim: &'static str,
    pub summary: &'static str,
}

pub const CATALOG: [FamilyInfo; 11] = [
    FamilyInfo {
        family: Family::Helicoid,
        kind: Kind::Height,
        source: "Example 3",
        params: &[Param::Lambda],
        ambient_dim: "2",
        summary: "lambda * arctan(y1/x1)",
    },
    FamilyInfo {
        family: Family::ChFunction,
        kind: Kind::Height,
        source: "Example 1",
        params: &[Param::N, Param::Lambda],
        ambient_dim: "2n",
        summary: "lambda/2 * arctan(2<X,Y> / (|X|^2 - |Y|^2))",
    },
    FamilyInfo {
        family: Family::Superposition,
        kind: Kind::Height,
        source: "Example 2",
        params: &[Param::K, Param::Mu],
        ambient_dim: "2*sum(k)",
        summary: "sum_j mu_j * (CH height on k_j pairs); default k = 4,1,1, mu = 1,2,3",
    },
    FamilyInfo {
        family: Family::LawsonR4,
        kind: Kind::Cone,
        source: "Example 4",
        params: &[Param::Order],
        ambient_dim: "4",
        summary: "y2*Re((x1+iy1)^N) - x2*Im((x1+iy1)^N), degree N+1",
    },
    FamilyInfo {
        family: Family::TkachevCubic,
        kind: Kind::Cone,
        source: "Example 5",
        params: &[Param::N],
        ambient_dim: "2n+2",
        summary: "y_{n+1}*T1 - x_{n+1}*T2, degree 3",
    },
    FamilyInfo {
        family: Family::TkachevPower,
        kind: Kind::Cone,
        source: "Example 6",
        params: &[Param::N, Param::Order],
        ambient_dim: "2n+2",
        summary: "y_{n+1}*Re((T1+iT2)^N) - x_{n+1}*Im((T1+iT2)^N), degree 2N+1",
    },
    FamilyInfo {
        family: Family::Quintic4n2,
        kind: Kind::Cone,
        source: "Example 7",
        params: &[Param::N],
        ambient_dim: "4n+2",
        summary: "y_{2n+1}(T1S1 - T2S2) - x_{2n+1}(T2S1 + T1S2), degree 5",
    },
    FamilyInfo {
        family: Family::ProductArg,
        kind: Kind::Cone,
        source: "Example 8",
        params: &[Param::K],
        ambient_dim: "2*len(k)",
        summary: "Im prod_j (x_j + i y_j)^k_j, gcd(k) = 1, degree sum(k)",
    },
    FamilyInfo {
        family: Family::Clifford,
        kind: Kind::Cone,
        source: "Example 3",
        params: &[],
        ambient_dim: "4",
        summary: "x1*y2 - y1*x2, degree 2",
    },
    FamilyInfo {
        family: Family::GraphSplit,
        kind: Kind::Level,
        source: "general",
        params: &[Param::N, Param::Order],
        ambient_dim: "m+1 (m = 2, or 2n)",
        summary: "-z + f with f = N*arctan(y1/x1), or N*arctan(T2/T1) when n is given",
    },
    FamilyInfo {
        family: Family::ArctanSplit,
        kind: Kind::Level,
        source: "general",
        params: &[Param::N, Param::Order],
        ambient_dim: "m+2 (m = 2, or 2n)",
        summary: "-arctan(y_{m+1}/x_{m+1}) + f with f as for graph_split",
    },
];

impl Family {
    pub fn info(self) -> &'static FamilyInfo {
        CATALOG.iter().find(|i| i.family == self).expect("every family is cataloged")
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::Helicoid => "helicoid",
            Family::ChFunction => "ch_function",
            Family::Superposition => "superposition",
            Family::LawsonR4 => "lawson_r4",
            Family::TkachevCubic => "tkachev_cubic",
            Family::TkachevPower => "tkachev_power",
            Family::Quintic4n2 => "quintic_4n2",
            Family::ProductArg => "product_arg",
            Family::Clifford => "clifford",
            Family::GraphSplit => "graph_split",
            Family::ArctanSplit => "arctan_split",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        CATALOG.iter().map(|i| i.family).find(|f| f.tag() == tag)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Parameter record naming one family member. Only the fields the family
/// reads are consulted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

/// A built family member.
#[derive(Clone, Debug)]
pub enum Construction {
    Height(ScalarField),
    Cone(Polynomial),
    Level(ScalarField),
}

impl Construction {
    /// The function whose zero set is the surface: the cone polynomial,
    /// the level function itself, or `−z + f` for a height.
    pub fn surface_function(&self) -> ScalarField {
        match self {
            Construction::Height(f) => graph_split(f),
            Construction::Cone(p) => ScalarField::from_poly(p),
            Construction::Level(u) => u.clone(),
        }
    }
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec { family, n: None, order: None, k: None, mu: None, lambda: None }
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_order(mut self, order: u32) -> Self {
        self.order = Some(order);
        self
    }

    pub fn with_k(mut self, k: Vec<u32>) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_mu(mut self, mu: Vec<f64>) -> Self {
        self.mu = Some(mu);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    /// Names of set fields this family does not read.
    pub fn unused_fields(&self) -> Vec<&'static str> {
        let params = self.family.info().params;
        let set = [
            (Param::N, self.n.is_some()),
            (Param::Order, self.order.is_some()),
            (Param::K, self.k.is_some()),
            (Param::Mu, self.mu.is_some()),
            (Param::Lambda, self.lambda.is_some()),
        ];
        set.iter()
            .filter(|(p, is_set)| *is_set && !params.contains(p))
            .map(|(p, _)| p.flag())
            .collect()
    }

    fn require(&self, value: Option<u32>, p: Param) -> Result<u32, ConstructionError> {
        value.ok_or_else(|| {
            ConstructionError::InvalidParameter(format!(
                "family {} requires --{}",
                self.family,
                p.flag()
            ))
        })
    }

    fn split_base(&self) -> Result<ScalarField, ConstructionError> {
        let order = self.order.unwrap_or(1);
        if order == 0 {
            return Err(ConstructionError::InvalidParameter("N must be a positive integer".into()));
        }
        let base = match self.n {
            None => helicoid_height(),
            Some(n) => pair_angle(n)?,
        };
        Ok(if order == 1 { base } else { base.scale(order as f64) })
    }

    pub fn build(&self) -> Result<Construction, ConstructionError> {
        let lambda = self.lambda.unwrap_or(1.0);
        let scaled = |f: ScalarField| if lambda == 1.0 { f } else { f.scale(lambda) };
        Ok(match self.family {
            Family::Helicoid => Construction::Height(scaled(helicoid_height())),
            Family::ChFunction => {
                Construction::Height(scaled(ch_height(self.require(self.n, Param::N)?)?))
            }
            Family::Superposition => {
                let k = self.k.clone().unwrap_or_else(|| vec![4, 1, 1]);
                let mu = self.mu.clone().unwrap_or_else(|| vec![1.0, 2.0, 3.0]);
                if k.contains(&0) {
                    return Err(ConstructionError::InvalidParameter(
                        "block sizes k must be positive".into(),
                    ));
                }
                Construction::Height(multi_screw_height(&k, &mu)?)
            }
            Family::LawsonR4 => Construction::Cone(lawson_cone_r4(self.require(self.order, Param::Order)?)?),
            Family::TkachevCubic => Construction::Cone(tkachev_cubic(self.require(self.n, Param::N)?)?),
            Family::TkachevPower => Construction::Cone(tkachev_power_cone(
                self.require(self.n, Param::N)?,
                self.require(self.order, Param::Order)?,
            )?),
            Family::Quintic4n2 => Construction::Cone(quintic_cone_4n2(self.require(self.n, Param::N)?)?),
            Family::ProductArg => {
                let k = self.k.as_deref().ok_or_else(|| {
                    ConstructionError::InvalidParameter("family product_arg requires --k".into())
                })?;
                Construction::Cone(product_arg_cone(k)?)
            }
            Family::Clifford => Construction::Cone(clifford_cone()),
            Family::GraphSplit => Construction::Level(graph_split(&self.split_base()?)),
            Family::ArctanSplit => Construction::Level(arctan_split(&self.split_base()?)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_every_family_once() {
        assert_eq!(CATALOG.len(), 11);
        for info in &CATALOG {
            assert_eq!(Family::from_tag(info.family.tag()), Some(info.family));
            let json = serde_json::to_string(&info.family).unwrap();
            assert_eq!(json, format!("\"{}\"", info.family.tag()));
        }
    }

    #[test]
    fn family_spec_json() {
        let spec = FamilySpec::new(Family::TkachevPower).with_n(2).with_order(3);
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"family":"tkachev_power","n":2,"N":3}"#);
        let back: FamilySpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn unused_fields_are_reported() {
        let spec = FamilySpec::new(Family::LawsonR4).with_order(2).with_n(3);
        assert_eq!(spec.unused_fields(), vec!["n"]);
    }

    #[test]
    fn missing_parameters_are_errors() {
        assert!(FamilySpec::new(Family::LawsonR4).build().is_err());
        assert!(FamilySpec::new(Family::ProductArg).build().is_err());
        assert!(FamilySpec::new(Family::TkachevPower).with_n(1).build().is_err());
    }

    #[test]
    fn cross_family_consistency() {
        let a = tkachev_cubic(1).unwrap();
        assert_eq!(a, lawson_cone_r4(2).unwrap());
        assert_eq!(a, tkachev_power_cone(1, 1).unwrap());
    }

    #[test]
    fn builds_expected_kinds() {
        for info in &CATALOG {
            let spec = FamilySpec {
                family: info.family,
                n: Some(2),
                order: Some(2),
                k: Some(vec![1, 2]),
                mu: Some(vec![1.0, 1.0]),
                lambda: None,
            };
            let built = spec.build().unwrap();
            let kind = match built {
                Construction::Height(_) => Kind::Height,
                Construction::Cone(_) => Kind::Cone,
                Construction::Level(_) => Kind::Level,
            };
            assert_eq!(kind, info.kind, "{}", info.family);
        }
    }
}
