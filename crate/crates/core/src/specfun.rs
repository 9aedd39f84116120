//! Log-gamma and the first three polygamma functions on the positive reals.
//!
//! The polygammas shift the argument upward with the recurrence
//! `ψ⁽ⁿ⁾(x + 1) = ψ⁽ⁿ⁾(x) + (−1)ⁿ n! / xⁿ⁺¹` until it reaches
//! [`ASYMPTOTIC_THRESHOLD`], then sum the Bernoulli asymptotic series.
//! `ln Γ` uses the Stirling series above the threshold and a Taylor series
//! around 1 and 2 below it, so that relative accuracy survives near its zeros.

use crate::error::{Error, Result};

/// Smallest argument accepted by every function in this module.
pub const MIN_ARGUMENT: f64 = 1e-300;

/// Arguments at or above this value go straight to the asymptotic series.
pub const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// B₂ₖ for k = 1..=8.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// ζ(k) − 1 for k = 2..=40.
#[allow(clippy::excessive_precision)]
const ZETA_MINUS_ONE: [f64; 39] = [
    0.644_934_066_848_226_436_472_4,
    0.202_056_903_159_594_285_399_7,
    0.082_323_233_711_138_191_516,
    0.036_927_755_143_369_926_331_37,
    0.017_343_061_984_449_139_714_52,
    0.008_349_277_381_922_826_839_798,
    0.004_077_356_197_944_339_378_685,
    0.002_008_392_826_082_214_417_853,
    0.000_994_575_127_818_085_337_146,
    0.000_494_188_604_119_464_558_702_3,
    0.000_246_086_553_308_048_298_638,
    0.000_122_713_347_578_489_146_751_8,
    0.000_061_248_135_058_704_829_258_55,
    0.000_030_588_236_307_020_493_551_73,
    0.000_015_282_259_408_651_871_732_57,
    0.000_007_637_197_637_899_762_273_6,
    0.000_003_817_293_264_999_839_856_462,
    0.000_001_908_212_716_553_938_925_657,
    9.539_620_338_727_961_131_52e-7,
    4.769_329_867_878_064_631_167e-7,
    2.384_505_027_277_329_900_036e-7,
    1.192_199_259_653_110_730_678e-7,
    5.960_818_905_125_947_961_244e-8,
    2.980_350_351_465_228_018_606e-8,
    1.490_155_482_836_504_123_466e-8,
    7.450_711_789_835_429_491_981e-9,
    3.725_334_024_788_457_054_819e-9,
    1.862_659_723_513_049_006_404e-9,
    9.313_274_324_196_681_828_718e-10,
    4.656_629_065_033_784_072_989e-10,
    2.328_311_833_676_505_492_002e-10,
    1.164_155_017_270_051_977_593e-10,
    5.820_772_087_902_700_889_251e-11,
    2.910_385_044_497_099_686_928e-11,
    1.455_192_189_104_198_423_598e-11,
    7.275_959_835_057_481_014_509e-12,
    3.637_979_547_378_651_190_237e-12,
    1.818_989_650_307_065_947_653e-12,
    9.094_947_840_263_889_282_877e-13,
];

/// A strictly positive real number (≥ [`MIN_ARGUMENT`]).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self> {
        Self::checked("PositiveReal", value)
    }

    fn checked(function: &'static str, value: f64) -> Result<Self> {
        // NaN fails the comparison as well.
        if value >= MIN_ARGUMENT && value.is_finite() {
            Ok(PositiveReal(value))
        } else {
            Err(Error::Domain { function, value })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn ln_gamma(self) -> f64 {
        ln_gamma_unchecked(self.0)
    }

    pub fn digamma(self) -> f64 {
        digamma_unchecked(self.0)
    }

    pub fn trigamma(self) -> f64 {
        trigamma_tetragamma_unchecked(self.0).0
    }

    pub fn tetragamma(self) -> f64 {
        trigamma_tetragamma_unchecked(self.0).1
    }
}

impl TryFrom<f64> for PositiveReal {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        PositiveReal::new(value)
    }
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    Ok(PositiveReal::checked("log_gamma", x)?.ln_gamma())
}

/// ψ(x) = d/dx ln Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    Ok(PositiveReal::checked("digamma", x)?.digamma())
}

/// ψ′(x), always positive.
pub fn trigamma(x: f64) -> Result<f64> {
    Ok(PositiveReal::checked("trigamma", x)?.trigamma())
}

/// ψ″(x), always negative.
pub fn tetragamma(x: f64) -> Result<f64> {
    Ok(PositiveReal::checked("tetragamma", x)?.tetragamma())
}

/// Series for ln Γ(2 + z), |z| ≤ 1/2.
fn ln_gamma_two_plus(z: f64) -> f64 {
    let mut sum = 0.0;
    // (−z)^k
    let mut power = -z;
    for (i, zeta) in ZETA_MINUS_ONE.iter().enumerate() {
        power *= -z;
        let k = (i + 2) as f64;
        let term = zeta * power / k;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    z * (1.0 - EULER_GAMMA) + sum
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x >= ASYMPTOTIC_THRESHOLD {
        return stirling(x);
    }
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x <= 1.5 {
        // ln Γ(1 + z) = ln Γ(2 + z) − ln(1 + z)
        let z = x - 1.0;
        return ln_gamma_two_plus(z) - z.ln_1p();
    }
    // Walk down into (1.5, 2.5].
    let mut y = x;
    let mut product = 1.0;
    while y > 2.5 {
        y -= 1.0;
        product *= y;
    }
    ln_gamma_two_plus(y - 2.0) + product.ln()
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut correction = 0.0;
    let mut power = inv;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let k = (i + 1) as f64;
        correction += b / (2.0 * k * (2.0 * k - 1.0)) * power;
        power *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + correction
}

pub(crate) fn digamma_unchecked(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut z = x;
    while z < ASYMPTOTIC_THRESHOLD {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut series = 0.0;
    let mut power = inv2;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let k = (i + 1) as f64;
        series += b / (2.0 * k) * power;
        power *= inv2;
    }
    shift + z.ln() - 0.5 / z - series
}

/// (ψ′(x), ψ″(x)) sharing one argument shift.
pub(crate) fn trigamma_tetragamma_unchecked(x: f64) -> (f64, f64) {
    let mut tri = 0.0;
    let mut tetra = 0.0;
    let mut z = x;
    while z < ASYMPTOTIC_THRESHOLD {
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        tri += inv2;
        tetra -= 2.0 * inv2 * inv;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // ψ′(z) ~ 1/z + 1/(2z²) + Σ B₂ₖ / z^(2k+1)
    // ψ″(z) ~ −1/z² − 1/z³ − Σ (2k+1) B₂ₖ / z^(2k+2)
    let mut tri_series = 0.0;
    let mut tetra_series = 0.0;
    let mut power = inv2 * inv;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let k = (i + 1) as f64;
        tri_series += b * power;
        tetra_series += (2.0 * k + 1.0) * b * power * inv;
        power *= inv2;
    }
    tri += inv + 0.5 * inv2 + tri_series;
    tetra -= inv2 + inv2 * inv + tetra_series;
    (tri, tetra)
}
