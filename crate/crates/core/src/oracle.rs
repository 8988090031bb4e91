//! Slow, independent reference integrators used to cross-check the closed
//! forms and Gauss–Jacobi rules of the solver.
//!
//! Everything here is adaptive Gauss–Kronrod (7/15) after the substitution
//! `u = (t - r)^(1-α)`, which turns `∫_0^t g(r) (t - r)^(-α) dr` into the
//! smooth integral `(1-α)⁻¹ ∫_0^(t^(1-α)) g(t - u^(1/(1-α))) du`. The
//! integrands come straight from the kernel derivative tables, not from the
//! derived formulas the solver uses.

use crate::fracmath::gamma;
use crate::kernels::r2_raw;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let dx = h * XGK[k];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive bisection to an absolute tolerance.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol || depth >= 48 {
            return value;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth + 1) + recurse(f, m, b, 0.5 * tol, depth + 1)
    }
    if b <= a {
        return 0.0;
    }
    recurse(f, a, b, tol, 0)
}

/// `∫_0^t g(r) (t - r)^(-α) dr` for `0 <= α < 1`, with `g` smooth between
/// the given breakpoints.
pub fn weakly_singular<F: Fn(f64) -> f64>(g: F, t: f64, alpha: f64, breaks: &[f64], tol: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let p = 1.0 - alpha;
    let r_of = |u: f64| t - u.powf(1.0 / p);
    let mut cuts: Vec<f64> = breaks
        .iter()
        .filter(|&&r| r > 0.0 && r < t)
        .map(|&r| (t - r).powf(p))
        .collect();
    cuts.push(0.0);
    cuts.push(t.powf(p));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let h = |u: f64| g(r_of(u).max(0.0));
    cuts.windows(2)
        .map(|w| adaptive(&h, w[0], w[1], tol / cuts.len() as f64))
        .sum::<f64>()
        / p
}

/// Reference value of the single Caputo transform of the time kernel.
pub fn caputo_time_kernel(eta: f64, t: f64, alpha: f64, tol: f64) -> f64 {
    if alpha == 1.0 {
        return r2_raw(t, eta, 1, 0);
    }
    weakly_singular(|r| r2_raw(r, eta, 1, 0), t, alpha, &[eta], tol)
        / gamma(1.0 - alpha).expect("gamma of a positive argument")
}

/// Reference value of the double Caputo transform: the iterated integral of
/// `∂_r ∂_s R2(r, s) (t_i - r)^(-α) (t_j - s)^(-α) / Γ(1-α)²`.
pub fn double_caputo(t_i: f64, t_j: f64, alpha: f64, tol: f64) -> f64 {
    if alpha == 1.0 {
        return r2_raw(t_i, t_j, 1, 1);
    }
    let inner = |s: f64| weakly_singular(|r| r2_raw(r, s, 1, 1), t_i, alpha, &[s], 0.01 * tol);
    let g = gamma(1.0 - alpha).expect("gamma of a positive argument");
    weakly_singular(inner, t_j, alpha, &[t_i], tol) / (g * g)
}
