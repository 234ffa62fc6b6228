use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::CodeError;
use crate::field::FElem;
use crate::geometry::{curve_fiber, gamma_set, Family, GeometryError, SurfaceSpec};

/// Which construction a [`CodeSpec`] follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Generic fibration code on any surface: `T` is the union of the
    /// curves over `Gamma`, `V` spans `x^i y^j z^k` in a box.
    Generic,
    /// The box construction on the `ex4` surface with `eta = p`,
    /// `rho3 = p^2 - 2p` and `Gamma` all nonzero `gamma`.
    Ex4,
    /// Union basis `{y^i x^j} + {y^k z^l}` on all of the `ex5` surface with
    /// the planes `z = 0` and `x = 0` as middle groups.
    Ex5,
    /// Box construction on the `ex5l` surface with `rho3 = p^2 - 2`.
    Ex5Lambda,
}

impl Construction {
    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Generic => "generic",
            Construction::Ex4 => "ex4",
            Construction::Ex5 => "ex5",
            Construction::Ex5Lambda => "ex5l",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "generic" | "thm3" => Ok(Construction::Generic),
            "ex4" => Ok(Construction::Ex4),
            "ex5" => Ok(Construction::Ex5),
            "ex5l" | "ex5-lambda" => Ok(Construction::Ex5Lambda),
            other => Err(format!("unknown construction `{other}`")),
        }
    }
}

/// Parameters of an evaluation code.
///
/// For [`Construction::Ex5`] the fields `eta`, `nu` and `rho3` do not shape
/// the code; they are stored as `p^2`, `p` and `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    pub surface: SurfaceSpec,
    pub construction: Construction,
    pub eta: usize,
    pub nu: u32,
    pub rho1: usize,
    pub rho2: usize,
    pub rho3: usize,
    /// Planes `z = gamma` supporting the evaluation set, ascending.
    pub gamma: Vec<FElem>,
}

/// What the validator established about a box construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    /// Largest total degree of a curve over `Gamma`.
    pub max_curve_degree: u32,
    /// Point count a curve needs to certify injectivity.
    pub threshold: u64,
    /// Number of `gamma` in `Gamma` whose curve reaches the threshold.
    pub qualifying_gammas: usize,
    pub notes: Vec<String>,
}

fn invalid(msg: String) -> CodeError {
    CodeError::InvalidCodeSpec(msg)
}

impl CodeSpec {
    pub fn p(&self) -> usize {
        self.surface.p() as usize
    }

    /// Code on the `ex4` surface with `2 <= rho1, rho2 <= p`.
    pub fn ex4(p: u32, rho1: usize, rho2: usize) -> Result<Self, CodeError> {
        let surface = SurfaceSpec::ex4(p)?;
        let pu = p as usize;
        let spec = CodeSpec {
            gamma: surface.ctx.nonzero_elements().collect(),
            surface,
            construction: Construction::Ex4,
            eta: pu,
            nu: p + 1,
            rho1,
            rho2,
            rho3: pu * pu - 2 * pu,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Union-basis code on the whole `ex5` surface, `p <= rho1 <= p^2`.
    pub fn ex5(p: u32, rho1: usize, rho2: usize) -> Result<Self, CodeError> {
        let surface = SurfaceSpec::ex5(p)?;
        let pu = p as usize;
        let spec = CodeSpec {
            surface,
            construction: Construction::Ex5,
            eta: pu * pu,
            nu: p,
            rho1,
            rho2,
            rho3: 0,
            gamma: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Box code on `y^p - y = x^{p+1} z^{p+1} - lambda` with `Tr(lambda) != 0`.
    pub fn ex5_lambda(
        p: u32,
        lambda: Option<FElem>,
        eta: usize,
        rho1: usize,
        rho2: usize,
    ) -> Result<Self, CodeError> {
        let surface = SurfaceSpec::family(Family::Ex5Lambda, p, lambda)?;
        let pu = p as usize;
        let gamma = gamma_set(&surface, eta.max(1));
        let spec = CodeSpec {
            surface,
            construction: Construction::Ex5Lambda,
            eta,
            nu: p + 1,
            rho1,
            rho2,
            rho3: pu * pu - 2,
            gamma,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Generic construction on any surface: `Gamma` and `nu` are computed
    /// from the fibers.
    pub fn generic(
        surface: SurfaceSpec,
        eta: usize,
        rho1: usize,
        rho2: usize,
        rho3: usize,
    ) -> Result<Self, CodeError> {
        let gamma = gamma_set(&surface, eta.max(1));
        let nu = gamma
            .iter()
            .map(|&g| surface.curve_degree(g))
            .max()
            .unwrap_or(surface.p());
        let spec = CodeSpec {
            surface,
            construction: Construction::Generic,
            eta,
            nu,
            rho1,
            rho2,
            rho3,
            gamma,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every hypothesis of the construction by enumeration.
    pub fn validate(&self) -> Result<Validation, CodeError> {
        let p = self.p();
        let ctx = &self.surface.ctx;
        if !(2..=p).contains(&self.rho2) {
            return Err(invalid(format!("rho2 = {} outside [2, {p}]", self.rho2)));
        }
        let family = self.surface.family;
        let want_family = match self.construction {
            Construction::Generic => None,
            Construction::Ex4 => Some(Family::Ex4),
            Construction::Ex5 => Some(Family::Ex5),
            Construction::Ex5Lambda => Some(Family::Ex5Lambda),
        };
        if want_family.is_some_and(|f| f != family) {
            return Err(invalid(format!(
                "construction {} needs the {} surface, got {family}",
                self.construction,
                want_family.unwrap()
            )));
        }

        if self.construction == Construction::Ex5 {
            if !(p..=p * p).contains(&self.rho1) {
                return Err(invalid(format!(
                    "rho1 = {} outside [{p}, {}]",
                    self.rho1,
                    p * p
                )));
            }
            return Ok(Validation {
                max_curve_degree: p as u32,
                threshold: 0,
                qualifying_gammas: 0,
                notes: Vec::new(),
            });
        }

        if !(2..=self.eta).contains(&self.rho1) {
            return Err(invalid(format!(
                "rho1 = {} outside [2, eta = {}]",
                self.rho1, self.eta
            )));
        }
        if self.rho3 > p * p - 1 {
            return Err(invalid(format!("rho3 = {} exceeds p^2 - 1", self.rho3)));
        }
        match self.construction {
            Construction::Ex4 => {
                let expected_rho3 = p * p - 2 * p;
                if self.eta != p || self.nu as usize != p + 1 || self.rho3 != expected_rho3 {
                    return Err(invalid(format!(
                        "ex4 fixes eta = {p}, nu = {}, rho3 = {expected_rho3}",
                        p + 1
                    )));
                }
                if self.gamma.len() != p * p - 1 || self.gamma.contains(&FElem::ZERO) {
                    return Err(invalid("ex4 uses every nonzero gamma".into()));
                }
            }
            Construction::Ex5Lambda => {
                if ctx.trace(self.surface.lambda).is_zero() {
                    return Err(invalid("ex5l needs Tr(lambda) != 0".into()));
                }
                if !(2..=p + 1).contains(&self.eta) {
                    return Err(invalid(format!(
                        "eta = {} outside [2, {}]",
                        self.eta,
                        p + 1
                    )));
                }
                if self.eta > self.rho1 + self.rho2 {
                    return Err(invalid(format!(
                        "eta = {} exceeds rho1 + rho2 = {}",
                        self.eta,
                        self.rho1 + self.rho2
                    )));
                }
                if self.rho3 != p * p - 2 {
                    return Err(invalid(format!("ex5l fixes rho3 = {}", p * p - 2)));
                }
            }
            _ => {}
        }

        if self.gamma.is_empty() {
            return Err(CodeError::EmptyEvaluationSet);
        }
        if self.gamma.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("gamma must be strictly ascending".into()));
        }

        let mut max_curve_degree = 0;
        let mut counts = Vec::with_capacity(self.gamma.len());
        for &g in &self.gamma {
            let fiber = curve_fiber(&self.surface, g).map_err(|e| match e {
                GeometryError::DegenerateFiber { .. } => {
                    invalid(format!("gamma #{} has a degenerate fiber", g.index()))
                }
                other => other.into(),
            })?;
            if fiber.x_support.len() < self.eta {
                return Err(invalid(format!(
                    "gamma #{} has x-support {} < eta = {}",
                    g.index(),
                    fiber.x_support.len(),
                    self.eta
                )));
            }
            let deg = self.surface.curve_degree(g);
            max_curve_degree = max_curve_degree.max(deg);
            counts.push(fiber.points.len() as u64);
        }
        if max_curve_degree > self.nu {
            return Err(invalid(format!(
                "curve degree {max_curve_degree} exceeds nu = {}",
                self.nu
            )));
        }

        let bezout = self.nu as u64 * (self.eta - self.rho1 + p - self.rho2) as u64;
        // The lambda family certifies injectivity with a non-strict count
        // (its curves are product grids); everything else needs one point
        // beyond the Bezout bound.
        let threshold = if self.construction == Construction::Ex5Lambda {
            bezout
        } else {
            bezout + 1
        };
        let qualifying_gammas = counts.iter().filter(|&&c| c >= threshold).count();
        if qualifying_gammas < self.rho3 + 1 {
            return Err(invalid(format!(
                "only {qualifying_gammas} curves have >= {threshold} points, need rho3 + 1 = {}",
                self.rho3 + 1
            )));
        }

        let mut notes = Vec::new();
        if self.construction == Construction::Generic {
            notes.push(String::from(
                "curves Z_gamma are assumed irreducible for the Bezout count; not checked",
            ));
        }
        Ok(Validation {
            max_curve_degree,
            threshold,
            qualifying_gammas,
            notes,
        })
    }
}
