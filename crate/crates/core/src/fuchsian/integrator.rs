//! Explicit Runge–Kutta of order 8(5,3) (Dormand–Prince) for complex
//! linear systems along a parametrized path `s ∈ [0, 1]`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const A: [[f64; 12]; 12] = [
    [0.0; 12],
    [5.260_015_195_876_773E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.972_505_698_453_79E-2, 5.917_517_095_361_37E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.958_758_547_680_685E-2, 0.0, 8.876_275_643_042_054E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        2.413_651_341_592_667E-1,
        0.0,
        -8.845_494_793_282_861E-1,
        9.248_340_032_617_92E-1,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        3.703_703_703_703_703_5E-2,
        0.0,
        0.0,
        1.708_286_087_294_738_6E-1,
        1.254_676_875_668_224_2E-1,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        3.7109375E-2,
        0.0,
        0.0,
        1.702_522_110_195_440_5E-1,
        6.021_653_898_045_596E-2,
        -1.7578125E-2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        3.709_200_011_850_479E-2,
        0.0,
        0.0,
        1.703_839_257_122_399_8E-1,
        1.072_620_304_463_732_8E-1,
        -1.531_943_774_862_440_2E-2,
        8.273_789_163_814_023E-3,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        6.241_109_587_160_757E-1,
        0.0,
        0.0,
        -3.360_892_629_446_941_4,
        -8.682_193_468_417_26E-1,
        2.759_209_969_944_671E1,
        2.015_406_755_047_789_4E1,
        -4.348_988_418_106_996E1,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        4.776_625_364_382_643_4E-1,
        0.0,
        0.0,
        -2.488_114_619_971_667_7,
        -5.902_908_268_368_43E-1,
        2.123_005_144_818_119_3E1,
        1.527_923_363_288_242_3E1,
        -3.328_821_096_898_486E1,
        -2.033_120_170_850_862_7E-2,
        0.0,
        0.0,
        0.0,
    ],
    [
        -9.371_424_300_859_873E-1,
        0.0,
        0.0,
        5.186_372_428_844_064,
        1.091_437_348_996_729_5,
        -8.149_787_010_746_927,
        -1.852_006_565_999_696E1,
        2.273_948_709_935_050_5E1,
        2.493_605_552_679_652_3,
        -3.046_764_471_898_219_6,
        0.0,
        0.0,
    ],
    [
        2.273_310_147_516_538,
        0.0,
        0.0,
        -1.053_449_546_673_725E1,
        -2.000_872_058_224_862_5,
        -1.795_893_186_311_88E1,
        2.794_888_452_941_996E1,
        -2.858_998_277_135_023_5,
        -8.872_856_933_530_63,
        1.236_056_717_579_430_3E1,
        6.433_927_460_157_636E-1,
        0.0,
    ],
];

const C: [f64; 12] = [
    0.0,
    5.260_015_195_876_773E-2,
    7.890_022_793_815_16E-2,
    1.183_503_419_072_274E-1,
    2.816_496_580_927_726E-1,
    3.333_333_333_333_333E-1,
    0.25,
    3.076_923_076_923_077E-1,
    6.512_820_512_820_513E-1,
    0.6,
    8.571_428_571_428_571E-1,
    1.0,
];

const B: [f64; 12] = [
    5.429_373_411_656_876_5E-2,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450_312_892_752_409,
    1.891_517_899_314_500_3,
    -5.801_203_960_010_585,
    3.111_643_669_578_199E-1,
    -1.521_609_496_625_161E-1,
    2.013_654_008_040_303_4E-1,
    4.471_061_572_777_259E-2,
];

const ER: [f64; 12] = [
    1.312_004_499_419_488E-2,
    0.0,
    0.0,
    0.0,
    0.0,
    -1.225_156_446_376_204_4,
    -4.957_589_496_572_502E-1,
    1.664_377_182_454_986_4,
    -3.503_288_487_499_736_6E-1,
    3.341_791_187_130_175E-1,
    8.192_320_648_511_571E-2,
    -2.235_530_786_388_629_4E-2,
];

const BHH: [f64; 3] = [
    2.440_944_881_889_764E-1,
    7.338_466_882_816_118E-1,
    2.205_882_352_941_176_6E-2,
];

const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.333;
const FAC_MAX: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// local error bound per step, mixed absolute/relative
    pub tol: f64,
    /// smallest allowed step relative to the unit parameter interval
    pub min_step: f64,
    pub max_steps: usize,
    pub initial_step: f64,
}

impl StepControl {
    pub fn new(tol: f64) -> Self {
        Self { tol, min_step: 1e-14, max_steps: 200_000, initial_step: 1.0 / 16.0 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    /// sum of accepted local error estimates, scaled by the tolerance
    pub error_estimate: f64,
}

impl StepStats {
    pub fn merge(&mut self, other: &StepStats) {
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        self.evaluations += other.evaluations;
        self.error_estimate += other.error_estimate;
    }
}

/// Integrates `y′ = f(s, y)` from `s = 0` to `s = 1`.
///
/// `observe` is called after every accepted step with the new state.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    y0: [Complex64; N],
    ctl: &StepControl,
    mut observe: O,
) -> Result<([Complex64; N], StepStats)>
where
    F: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
    O: FnMut(f64, &[Complex64; N]),
{
    let mut stats = StepStats::default();
    let mut s = 0.0f64;
    let mut y = y0;
    // compensated-summation residue of `y`
    let mut comp = [Complex64::new(0.0, 0.0); N];
    let mut h = ctl.initial_step.min(1.0);
    let mut k1 = f(s, &y);
    stats.evaluations += 1;
    let mut last = false;
    let mut reject_prev = false;

    while s < 1.0 {
        if stats.accepted + stats.rejected >= ctl.max_steps {
            return Err(Error::TooManySteps(ctl.max_steps));
        }
        if h < ctl.min_step {
            return Err(Error::StepUnderflow(s, stats.accepted));
        }
        if s + h >= 1.0 - 1e-15 {
            h = 1.0 - s;
            last = true;
        }

        let mut k = [[Complex64::new(0.0, 0.0); N]; 12];
        k[0] = k1;
        for j in 1..12 {
            let mut yj = y;
            for (i, &w) in A[j][..j].iter().enumerate() {
                if w != 0.0 {
                    for n in 0..N {
                        yj[n] += k[i][n] * (w * h);
                    }
                }
            }
            k[j] = f(s + C[j] * h, &yj);
        }
        stats.evaluations += 11;

        let mut y_new = y;
        let mut comp_new = comp;
        let mut e5 = 0.0;
        let mut e3 = 0.0;
        for i in 0..N {
            let mut incr = Complex64::new(0.0, 0.0);
            let mut er = Complex64::new(0.0, 0.0);
            for j in 0..12 {
                incr += k[j][i] * B[j];
                er += k[j][i] * ER[j];
            }
            let dy = incr * h - comp[i];
            y_new[i] = y[i] + dy;
            comp_new[i] = (y_new[i] - y[i]) - dy;
            let sk = ctl.tol * (1.0 + y[i].norm().max(y_new[i].norm()));
            let e3i = incr - k[0][i] * BHH[0] - k[8][i] * BHH[1] - k[11][i] * BHH[2];
            e3 += (e3i / sk).norm_sqr();
            e5 += (er / sk).norm_sqr();
        }
        let mut deno = e5 + 0.01 * e3;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h * e5 * (1.0 / (N as f64 * deno)).sqrt();
        if !err.is_finite() {
            h *= 0.25;
            last = false;
            stats.rejected += 1;
            reject_prev = true;
            continue;
        }

        let fac11 = err.powf(0.125);
        let fac = (fac11 / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
        let mut h_new = h / fac;

        if err <= 1.0 {
            stats.accepted += 1;
            stats.error_estimate += err * ctl.tol;
            s = if last { 1.0 } else { s + h };
            y = y_new;
            comp = comp_new;
            k1 = f(s, &y);
            stats.evaluations += 1;
            observe(s, &y);
            if reject_prev {
                h_new = h_new.min(h);
            }
            reject_prev = false;
            if last {
                break;
            }
        } else {
            h_new = h / (fac11 / SAFE).min(1.0 / FAC_MIN);
            stats.rejected += 1;
            reject_prev = true;
            last = false;
        }
        h = h_new;
    }
    Ok((y, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_along_unit_interval() {
        let lam = c(0.3, 2.0);
        let (y, stats) = integrate(|_, y: &[Complex64; 1]| [y[0] * lam], [c(1.0, 0.0)], &StepControl::new(1e-12), |_, _| {})
            .unwrap();
        assert!((y[0] - lam.exp()).norm() < 1e-11);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn rotation_preserves_norm() {
        let w = 40.0;
        let (y, _) = integrate(
            |_, y: &[Complex64; 2]| [y[1] * w, -y[0] * w],
            [c(1.0, 0.0), c(0.0, 0.0)],
            &StepControl::new(1e-11),
            |_, _| {},
        )
        .unwrap();
        assert!((y[0].re - w.cos()).abs() < 1e-9);
        assert!((y[1].re + w.sin()).abs() < 1e-9);
    }

    #[test]
    fn tolerance_controls_error() {
        let run = |tol| {
            let (y, _) =
                integrate(|s, y: &[Complex64; 1]| [y[0] * c(0.0, 30.0 * s)], [c(1.0, 0.0)], &StepControl::new(tol), |_, _| {})
                    .unwrap();
            (y[0] - c(0.0, 15.0).exp()).norm()
        };
        assert!(run(1e-6) < 1e-4);
        assert!(run(1e-12) < 1e-10);
    }

    #[test]
    fn blow_up_underflows() {
        let r = integrate(
            |s, _: &[Complex64; 1]| [c(1.0 / (0.5 - s).powi(3), 0.0)],
            [c(0.0, 0.0)],
            &StepControl::new(1e-10),
            |_, _| {},
        );
        assert!(matches!(r, Err(Error::StepUnderflow(..)) | Err(Error::TooManySteps(_))));
    }
}
