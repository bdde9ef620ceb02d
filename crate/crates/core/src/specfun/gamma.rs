//! Complex Gamma function (Lanczos, g = 7, n = 9) with reflection.

use crate::C64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Taylor coefficients of `1/Γ(z) = Σ_{k≥1} c_k z^k`.
pub(crate) const RGAMMA_TAYLOR: [f64; 30] = [
    1.0,
    0.577_215_664_901_532_860_6,
    -0.655_878_071_520_253_881_1,
    -0.042_002_635_034_095_235_53,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_75,
    -0.009_621_971_527_876_973_562,
    0.007_218_943_246_663_099_542,
    -0.001_165_167_591_859_065_112,
    -0.000_215_241_674_114_950_972_8,
    0.000_128_050_282_388_116_186_2,
    -0.000_020_134_854_780_788_238_66,
    -0.000_001_250_493_482_142_670_657,
    0.000_001_133_027_231_981_695_882,
    -2.056_338_416_977_607_103e-7,
    6.116_095_104_481_415_818e-9,
    5.002_007_644_469_222_930e-9,
    -1.181_274_570_487_020_145e-9,
    1.043_426_711_691_100_510e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783e-14,
    -5.348_122_539_423_017_982e-15,
    1.226_778_628_238_260_790e-15,
    -1.181_259_301_697_458_770e-16,
    1.186_692_254_751_600_333e-18,
    1.412_380_655_318_031_782e-18,
    -2.298_745_684_435_370_207e-19,
    1.714_406_321_927_337_433e-20,
];

fn lanczos_sum(z: C64) -> C64 {
    // z is the shifted argument (Γ(z+1) form)
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    x
}

/// Nonpositive integer test with a small relative window.
fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `Γ(z)`; returns infinity at the poles.
pub fn gamma(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        return C64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        return PI / ((PI * z).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// A logarithm of `Γ(z)` (exp of the result equals `Γ(z)`; the branch is
/// the principal one for `Re z ≥ 1/2`).
pub fn lgamma(z: C64) -> C64 {
    if z.re < 0.5 {
        return C64::new(PI.ln(), 0.0) - (PI * z).sin().ln() - lgamma(1.0 - z);
    }
    let z = z - 1.0;
    let t = z + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// `ln Γ(x)` for real `x > 0`.
pub fn lgamma_real(x: f64) -> f64 {
    lgamma(C64::new(x, 0.0)).re
}

/// `1/Γ(z)`, entire; exactly zero at the poles of Γ.
pub fn rgamma(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        return C64::new(0.0, 0.0);
    }
    if z.norm() < 0.5 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in RGAMMA_TAYLOR.iter().rev() {
            acc = acc * z + c;
        }
        return acc * z;
    }
    if z.re < 0.5 {
        // 1/Γ(z) = sin(πz) Γ(1−z)/π
        return (PI * z).sin() * gamma(1.0 - z) / PI;
    }
    if z.re > 140.0 {
        return (-lgamma(z)).exp();
    }
    1.0 / gamma(z)
}

/// Temme's auxiliary pair `Γ₁(μ) = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ)` and
/// `Γ₂(μ) = (1/Γ(1−μ) + 1/Γ(1+μ))/2` for `|μ| ≤ 1/2`.
pub fn temme_gammas(mu: C64) -> (C64, C64) {
    (horner_even(mu), horner_odd(mu))
}

fn horner_even(mu: C64) -> C64 {
    // −Σ_{k even} c_k μ^{k−2}
    let m2 = mu * mu;
    let mut acc = C64::new(0.0, 0.0);
    let mut k = RGAMMA_TAYLOR.len();
    while k >= 2 {
        if k % 2 == 0 {
            acc = acc * m2 - RGAMMA_TAYLOR[k - 1];
        }
        k -= 1;
    }
    acc
}

fn horner_odd(mu: C64) -> C64 {
    // Σ_{k odd} c_k μ^{k−1}
    let m2 = mu * mu;
    let mut acc = C64::new(0.0, 0.0);
    let mut k = RGAMMA_TAYLOR.len();
    while k >= 1 {
        if k % 2 == 1 {
            acc = acc * m2 + RGAMMA_TAYLOR[k - 1];
        }
        k -= 1;
    }
    acc
}

/// Digamma at positive integers, `ψ(n) = −γ + H_{n−1}`.
pub fn digamma_int(n: u32) -> f64 {
    assert!(n >= 1);
    let mut h = 0.0;
    for k in 1..n {
        h += 1.0 / k as f64;
    }
    h - EULER_GAMMA
}

/// Pochhammer symbol `(a)_s`.
pub fn pochhammer(a: C64, s: u32) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    for j in 0..s {
        p *= a + j as f64;
    }
    p
}
