use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{base_cost_w, chi, AdTree, ChiMode};

/// Past this many regions the threshold table is refused as a resource limit.
pub const MAX_REGIONS: usize = 100_000;

/// Approximation slack as an exact rational in `(0, 1]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::InvalidInput(format!(
                "epsilon {num}/{den} must lie in (0, 1]"
            )));
        }
        let g = num.gcd(&den);
        Ok(Epsilon {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

/// Accepts decimals (`0.25`, `.5`, `1`) and fractions (`1/4`).
impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse epsilon {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(n, d);
        }
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        if (whole.is_empty() && frac.is_empty())
            || !whole.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let frac = frac.trim_end_matches('0');
        if frac.len() > 18 {
            return Err(Error::InvalidInput(format!("epsilon {s:?} has too many digits")));
        }
        let den = 10u64.pow(frac.len() as u32);
        let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = whole
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Epsilon::new(num, den)
    }
}

/// Region geometry for one run: ratio `f = 1 + eps/z`, boundaries
/// `b_1 = 1, b_k = f * b_(k-1)` up to the first one reaching `w`.
///
/// Profits are integers, so a value `v` satisfies `v <= b_k` exactly when
/// `v <= floor(b_k)`. The floors are computed once with exact big-integer
/// arithmetic and region lookup is a binary search over them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FptasParams {
    epsilon: Epsilon,
    z: u64,
    f_num: u64,
    f_den: u64,
    w: u64,
    floors: Vec<u64>,
}

/// Builds region parameters for `tree`, which should already be normalized.
/// `z = max(1, ceil(2 log2 chi))` with `chi` taken in padded mode.
pub fn make_params(tree: &AdTree, epsilon: Epsilon) -> Result<FptasParams> {
    let chi_hat = chi(tree, ChiMode::Padded);
    let square = &chi_hat * &chi_hat;
    // ceil(log2 x) for integer x >= 1 is the bit length of x - 1.
    let z = (square - 1u32).bits().max(1);
    FptasParams::new(epsilon, z, base_cost_w(tree))
}

impl FptasParams {
    pub fn new(epsilon: Epsilon, z: u64, w: u64) -> Result<Self> {
        if z == 0 {
            return Err(Error::InvalidInput("z must be positive".into()));
        }
        let f_den = z
            .checked_mul(epsilon.den)
            .ok_or_else(|| Error::InvalidInput("epsilon denominator too large".into()))?;
        let f_num = f_den
            .checked_add(epsilon.num)
            .ok_or_else(|| Error::InvalidInput("epsilon denominator too large".into()))?;
        let floors = boundary_floors(w, f_num, f_den)?;
        Ok(FptasParams {
            epsilon,
            z,
            f_num,
            f_den,
            w,
            floors,
        })
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    /// `f` as a reduced fraction.
    pub fn ratio(&self) -> (u64, u64) {
        let g = self.f_num.gcd(&self.f_den);
        (self.f_num / g, self.f_den / g)
    }

    pub fn w(&self) -> u64 {
        self.w
    }

    /// Number of regions `t_1` covering `(0, w]`.
    pub fn region_count(&self) -> usize {
        self.floors.len()
    }

    /// Upper bound on the length of any pruned list: one survivor per region
    /// plus the zero-profit region.
    pub fn list_bound(&self) -> usize {
        self.floors.len() + 1
    }

    /// Exact boundary `b_k = f^(k-1)` for `k >= 1`.
    pub fn boundary(&self, k: usize) -> BigRational {
        assert!(k >= 1, "boundaries start at b_1");
        let f = BigRational::new(BigInt::from(self.f_num), BigInt::from(self.f_den));
        num_traits::pow(f, k - 1)
    }

    /// `floor(b_k)` for `k` in `1..=t_1`.
    pub fn boundary_floors(&self) -> &[u64] {
        &self.floors
    }

    pub(crate) fn region_unchecked(&self, value: u64) -> usize {
        if value == 0 {
            0
        } else {
            self.floors.partition_point(|&b| b < value) + 1
        }
    }
}

/// Region index of an integer profit: 0 for zero, 1 for `(0, 1]`, otherwise
/// the `k` with `b_(k-1) < value <= b_k`.
pub fn region_of(value: u64, params: &FptasParams) -> Result<usize> {
    if value > params.w {
        return Err(Error::OutOfRange {
            value,
            max: params.w,
        });
    }
    Ok(params.region_unchecked(value))
}

/// Floors of `b_1, b_2, ...` up to the first boundary `>= w`.
///
/// Tracks `b_k = q + r / e` with `e = den^(k-1)` and `0 <= r < e`. One step
/// multiplies by `num/den`; the fractional carry is below 3 because `c < den`
/// and `f <= 2`, so it is settled with at most two subtractions.
fn boundary_floors(w: u64, num: u64, den: u64) -> Result<Vec<u64>> {
    let estimate = (w.max(1) as f64).ln() / (num as f64 / den as f64).ln();
    if estimate > MAX_REGIONS as f64 * 1.01 {
        return Err(too_many_regions());
    }
    let mut floors = vec![1u64];
    let mut q: u64 = 1;
    let mut r = BigUint::zero();
    let mut e = BigUint::one();
    while q < w {
        if floors.len() >= MAX_REGIONS {
            return Err(too_many_regions());
        }
        let qn = u128::from(q) * u128::from(num);
        let whole = qn / u128::from(den);
        let c = (qn % u128::from(den)) as u64;
        let mut x = &e * c + &r * num;
        let y = &e * den;
        let mut carry = 0u128;
        while x >= y {
            x -= &y;
            carry += 1;
        }
        q = u64::try_from(whole + carry).unwrap_or(u64::MAX);
        r = x;
        e = y;
        floors.push(q);
    }
    Ok(floors)
}

fn too_many_regions() -> Error {
    Error::ResourceLimit(format!(
        "more than {MAX_REGIONS} profit regions; use a larger epsilon"
    ))
}
