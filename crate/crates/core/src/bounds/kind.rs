//! Registry of bound kinds: tags, families, and zero-location hypotheses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Which side of the circle `|z| = k` the zeros must lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `|b_j| >= k >= 1`.
    Outside,
    /// `|b_j| <= k <= 1`.
    Inside,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Outside => "outside",
            Side::Inside => "inside",
        })
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "outside" => Ok(Side::Outside),
            "inside" => Ok(Side::Inside),
            other => Err(format!("unknown side `{other}` (expected `outside` or `inside`)")),
        }
    }
}

/// Upper bounds in terms of `M(R, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxNormBound {
    /// `|R'| <= |B'| M(R,1)`.
    Bernstein,
    /// Li-Mohapatra-Rodriguez, zeros in `|z| >= 1`.
    Lmr,
    /// Aziz-Zargar, zeros in `|z| >= k`.
    AzizZargar,
    /// Refinement with the zero moduli.
    Thm1,
    /// Refinement with `|α_0|`, `|α_m|`.
    Thm1Coeff,
}

/// Upper bounds in terms of the level-set maxima `M_1`, `M_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelSetBound {
    LmrA,
    AzizShahD,
    AzizShahF,
    Thm2,
    Thm2Coeff,
}

/// Lower bounds for zeros in `|z| <= k <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LowerBound {
    LmrC,
    AzizShahG,
    Thm3,
    Thm3Coeff,
}

/// Polynomial bounds, `n = deg P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolyBound {
    ErdosLax,
    Turan,
    MalikUpperRefined,
    ErdosLaxRefined,
    TuranMalikRefined,
    DubininRefined,
}

/// The `k = 1` coefficient forms, each in a ratio and a square-root variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaliShahForm {
    UpperRatio,
    UpperSqrt,
    LowerRatio,
    LowerSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    MaxNorm(MaxNormBound),
    LevelSet(LevelSetBound),
    Lower(LowerBound),
    Poly(PolyBound),
    WaliShah(WaliShahForm),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    MaxNormUpper,
    LevelSetUpper,
    Lower,
    Polynomial,
}

/// Radius the zero hypothesis is stated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Radius {
    One,
    K,
}

const ALL: [BoundKind; 24] = {
    use BoundKind::*;
    [
        MaxNorm(MaxNormBound::Bernstein),
        MaxNorm(MaxNormBound::Lmr),
        MaxNorm(MaxNormBound::AzizZargar),
        MaxNorm(MaxNormBound::Thm1),
        MaxNorm(MaxNormBound::Thm1Coeff),
        LevelSet(LevelSetBound::LmrA),
        LevelSet(LevelSetBound::AzizShahD),
        LevelSet(LevelSetBound::AzizShahF),
        LevelSet(LevelSetBound::Thm2),
        LevelSet(LevelSetBound::Thm2Coeff),
        WaliShah(WaliShahForm::UpperRatio),
        WaliShah(WaliShahForm::UpperSqrt),
        Poly(PolyBound::ErdosLax),
        Poly(PolyBound::MalikUpperRefined),
        Poly(PolyBound::ErdosLaxRefined),
        Lower(LowerBound::LmrC),
        Lower(LowerBound::AzizShahG),
        Lower(LowerBound::Thm3),
        Lower(LowerBound::Thm3Coeff),
        WaliShah(WaliShahForm::LowerRatio),
        WaliShah(WaliShahForm::LowerSqrt),
        Poly(PolyBound::Turan),
        Poly(PolyBound::TuranMalikRefined),
        Poly(PolyBound::DubininRefined),
    ]
};

impl BoundKind {
    pub fn all() -> &'static [BoundKind] {
        &ALL
    }

    /// Kinds whose hypothesis is on the given side, plus those with none.
    pub fn for_side(side: Side) -> Vec<BoundKind> {
        ALL.iter()
            .copied()
            .filter(|k| match k.side() {
                None => side == Side::Outside,
                Some(s) => s == side,
            })
            .collect()
    }

    pub fn tag(self) -> &'static str {
        use BoundKind::*;
        match self {
            MaxNorm(MaxNormBound::Bernstein) => "bernstein",
            MaxNorm(MaxNormBound::Lmr) => "lmr",
            MaxNorm(MaxNormBound::AzizZargar) => "aziz-zargar",
            MaxNorm(MaxNormBound::Thm1) => "thm1",
            MaxNorm(MaxNormBound::Thm1Coeff) => "thm1-coeff",
            LevelSet(LevelSetBound::LmrA) => "lmr-a",
            LevelSet(LevelSetBound::AzizShahD) => "aziz-shah-d",
            LevelSet(LevelSetBound::AzizShahF) => "aziz-shah-f",
            LevelSet(LevelSetBound::Thm2) => "thm2",
            LevelSet(LevelSetBound::Thm2Coeff) => "thm2-coeff",
            Lower(LowerBound::LmrC) => "lmr-c",
            Lower(LowerBound::AzizShahG) => "aziz-shah-g",
            Lower(LowerBound::Thm3) => "thm3",
            Lower(LowerBound::Thm3Coeff) => "thm3-coeff",
            Poly(PolyBound::ErdosLax) => "erdos-lax",
            Poly(PolyBound::Turan) => "turan",
            Poly(PolyBound::MalikUpperRefined) => "malik-refined",
            Poly(PolyBound::ErdosLaxRefined) => "erdos-lax-refined",
            Poly(PolyBound::TuranMalikRefined) => "turan-malik-refined",
            Poly(PolyBound::DubininRefined) => "dubinin-refined",
            WaliShah(WaliShahForm::UpperRatio) => "ws-upper-ratio",
            WaliShah(WaliShahForm::UpperSqrt) => "ws-upper-sqrt",
            WaliShah(WaliShahForm::LowerRatio) => "ws-lower-ratio",
            WaliShah(WaliShahForm::LowerSqrt) => "ws-lower-sqrt",
        }
    }

    pub fn family(self) -> Family {
        match self {
            BoundKind::MaxNorm(_) => Family::MaxNormUpper,
            BoundKind::LevelSet(_) => Family::LevelSetUpper,
            BoundKind::WaliShah(WaliShahForm::UpperRatio | WaliShahForm::UpperSqrt) => Family::LevelSetUpper,
            BoundKind::Lower(_) | BoundKind::WaliShah(_) => Family::Lower,
            BoundKind::Poly(_) => Family::Polynomial,
        }
    }

    /// Lower bounds pass when `lhs >= rhs`.
    pub fn is_lower(self) -> bool {
        matches!(
            self,
            BoundKind::Lower(_)
                | BoundKind::WaliShah(WaliShahForm::LowerRatio | WaliShahForm::LowerSqrt)
                | BoundKind::Poly(PolyBound::Turan | PolyBound::TuranMalikRefined | PolyBound::DubininRefined)
        )
    }

    /// Whether the bound depends on a level-set parameter `λ`.
    pub fn uses_lambda(self) -> bool {
        matches!(
            self,
            BoundKind::LevelSet(_) | BoundKind::WaliShah(WaliShahForm::UpperRatio | WaliShahForm::UpperSqrt)
        )
    }

    /// Zero-location hypothesis: side and the radius it refers to. `None`
    /// for bounds valid for every `R`.
    pub fn hypothesis(self) -> Option<(Side, Radius)> {
        use BoundKind::*;
        match self {
            MaxNorm(MaxNormBound::Bernstein) | LevelSet(LevelSetBound::LmrA) => None,
            MaxNorm(MaxNormBound::Lmr)
            | LevelSet(LevelSetBound::AzizShahD)
            | WaliShah(WaliShahForm::UpperRatio | WaliShahForm::UpperSqrt)
            | Poly(PolyBound::ErdosLax | PolyBound::ErdosLaxRefined) => Some((Side::Outside, Radius::One)),
            MaxNorm(_) | LevelSet(_) | Poly(PolyBound::MalikUpperRefined) => Some((Side::Outside, Radius::K)),
            Lower(LowerBound::LmrC)
            | WaliShah(_)
            | Poly(PolyBound::Turan | PolyBound::DubininRefined) => Some((Side::Inside, Radius::One)),
            Lower(_) | Poly(PolyBound::TuranMalikRefined) => Some((Side::Inside, Radius::K)),
        }
    }

    pub fn side(self) -> Option<Side> {
        self.hypothesis().map(|h| h.0)
    }

    /// Parses a comma-separated list of tags and the groups `all`,
    /// `all-upper`, `all-lower`.
    pub fn parse_list(s: &str) -> Result<Vec<BoundKind>, String> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let group: Vec<BoundKind> = match item {
                "all" => ALL.to_vec(),
                "all-upper" => Self::for_side(Side::Outside),
                "all-lower" => Self::for_side(Side::Inside),
                tag => vec![tag.parse()?],
            };
            for k in group {
                if !out.contains(&k) {
                    out.push(k);
                }
            }
        }
        if out.is_empty() {
            return Err("no bound kinds given".into());
        }
        Ok(out)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BoundKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL.iter()
            .copied()
            .find(|k| k.tag() == s)
            .ok_or_else(|| format!("unknown bound kind `{s}`"))
    }
}

impl Serialize for BoundKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for BoundKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
