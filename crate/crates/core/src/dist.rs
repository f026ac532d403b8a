//! Standard normal helpers and the truncated normal distribution.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use libm::erfc;
use statrs::function::erf::erfc_inv;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn std_normal_pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Φ(z), accurate in the lower tail.
pub fn std_normal_cdf(z: f64) -> f64 {
    if z == f64::NEG_INFINITY {
        return 0.0;
    }
    if z == f64::INFINITY {
        return 1.0;
    }
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Φ⁻¹(p) for p in (0, 1).
pub fn std_normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let z = -SQRT_2 * erfc_inv(2.0 * p);
    // One Newton step against the forward CDF tightens the rational approximation.
    let density = std_normal_pdf(z);
    if density > 0.0 {
        z - (std_normal_cdf(z) - p) / density
    } else {
        z
    }
}

/// A normal distribution restricted to `[lo, hi]` and renormalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedNormal {
    pub mean: f64,
    pub sd: f64,
    pub lo: f64,
    pub hi: f64,
}

impl TruncatedNormal {
    pub fn new(mean: f64, sd: f64, lo: f64, hi: f64) -> Self {
        debug_assert!(sd > 0.0 && lo < hi);
        Self { mean, sd, lo, hi }
    }

    fn standardized(&self) -> (f64, f64) {
        ((self.lo - self.mean) / self.sd, (self.hi - self.mean) / self.sd)
    }

    /// Probability mass of the parent normal inside `[lo, hi]`.
    pub fn mass(&self) -> f64 {
        let (a, b) = self.standardized();
        // Evaluate in whichever tail keeps relative precision.
        if a + b > 0.0 {
            std_normal_cdf(-a) - std_normal_cdf(-b)
        } else {
            std_normal_cdf(b) - std_normal_cdf(a)
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            return 0.0;
        }
        let z = (x - self.mean) / self.sd;
        let mass = self.mass();
        if mass > 0.0 {
            std_normal_pdf(z) / (self.sd * mass)
        } else {
            self.exponential_tail_pdf(x)
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return 1.0;
        }
        let (a, b) = self.standardized();
        let z = (x - self.mean) / self.sd;
        let mass = self.mass();
        if mass <= 0.0 {
            return self.exponential_tail_cdf(x);
        }
        let c = if a + b > 0.0 {
            (std_normal_cdf(-a) - std_normal_cdf(-z)) / mass
        } else {
            (std_normal_cdf(z) - std_normal_cdf(a)) / mass
        };
        c.clamp(0.0, 1.0)
    }

    /// Inverse CDF at `u` in (0, 1). The result is always inside `[lo, hi]`.
    ///
    /// For a fixed `u` the result is non-decreasing in `mean`.
    pub fn quantile(&self, u: f64) -> f64 {
        let (a, b) = self.standardized();
        let z = if a + b > 0.0 {
            // Mirror so that the far edge lies in the lower tail.
            -std_quantile_lower(-b, -a, 1.0 - u)
        } else {
            std_quantile_lower(a, b, u)
        };
        (self.mean + self.sd * z).clamp(self.lo, self.hi)
    }

    /// Density used when the interval is so deep in a tail that Φ underflows:
    /// there the normal is indistinguishable from a truncated exponential.
    fn exponential_tail_pdf(&self, x: f64) -> f64 {
        let (a, b) = self.standardized();
        let z = (x - self.mean) / self.sd;
        let (edge, dist, width) = if a + b > 0.0 {
            (a, z - a, b - a)
        } else {
            (-b, b - z, b - a)
        };
        let rate = edge.abs();
        let norm = -(-rate * width).exp_m1();
        rate * (-rate * dist).exp() / (norm * self.sd)
    }

    fn exponential_tail_cdf(&self, x: f64) -> f64 {
        let (a, b) = self.standardized();
        let z = (x - self.mean) / self.sd;
        let width = b - a;
        let c = if a + b > 0.0 {
            (-a * (z - a)).exp_m1() / (-a * width).exp_m1()
        } else {
            let rate = -b;
            1.0 - (-rate * (b - z)).exp_m1() / (-rate * width).exp_m1()
        };
        c.clamp(0.0, 1.0)
    }

    pub fn mean_value(&self) -> f64 {
        let (a, b) = self.standardized();
        let mass = self.mass();
        if mass <= 0.0 {
            return 0.5 * (self.lo + self.hi);
        }
        self.mean + self.sd * (std_normal_pdf(a) - std_normal_pdf(b)) / mass
    }
}

/// Standardized inverse CDF on `[a, b]` where `a + b <= 0`, i.e. `b` is the edge
/// nearer to (or past) the mode and `a` lies in the lower tail.
fn std_quantile_lower(a: f64, b: f64, u: f64) -> f64 {
    let pa = std_normal_cdf(a);
    let pb = std_normal_cdf(b);
    let mass = pb - pa;
    let z = if mass > 0.0 && pa + u * mass < 1.0 {
        std_normal_quantile(pa + u * mass)
    } else {
        // Both edges below about -37: Φ underflows. The density is proportional to
        // exp(b·(z-b)) near b, an exponential decaying away from b.
        let rate = -b;
        let width = b - a;
        b + (-((1.0 - u) * -(-rate * width).exp_m1())).ln_1p() / rate
    };
    z.clamp(a, b)
}

/// Gaussian peak density, `1 / (sd·√(2π))`.
pub fn gaussian_peak(sd: f64) -> f64 {
    1.0 / (sd * (2.0 * PI).sqrt())
}
