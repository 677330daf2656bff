//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite and semi-infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
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

/// Gauss weights for the nodes `XGK[1]`, `XGK[3]`, `XGK[5]` and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// How an integral over `[a, ∞)` is folded onto `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailRule {
    /// `x = a + u / (1 - u)`; suits algebraically decaying integrands.
    #[default]
    Rational,
    /// `x = a - ln(1 - u)`; suits exponentially decaying integrands.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings<R> {
    pub rel_tol: R,
    pub abs_tol: R,
    pub max_subdivisions: usize,
    pub tail: TailRule,
}

impl<R: Real> Default for QuadratureSettings<R> {
    fn default() -> Self {
        Self {
            rel_tol: R::default_rel_tol(),
            abs_tol: R::lit(1e-12).max(R::epsilon() * R::lit(10.0)),
            max_subdivisions: 200,
            tail: TailRule::Rational,
        }
    }
}

impl<R: Real> QuadratureSettings<R> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > R::zero()) {
            return Err(Error::invalid("rel_tol", "must be positive"));
        }
        if !(self.abs_tol > R::zero()) {
            return Err(Error::invalid("abs_tol", "must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", "must be at least 1"));
        }
        Ok(())
    }
}

/// Integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<R> {
    pub value: R,
    pub error: R,
    pub subdivisions: usize,
}

struct Panel<R> {
    lo: R,
    hi: R,
    value: R,
    error: R,
}

impl<R: Real> PartialEq for Panel<R> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<R: Real> Eq for Panel<R> {}
impl<R: Real> PartialOrd for Panel<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<R: Real> Ord for Panel<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn kronrod15<R: Real, F: Fn(R) -> R>(f: &F, lo: R, hi: R) -> Panel<R> {
    let half = R::lit(0.5);
    let center = half * (lo + hi);
    let half_len = half * (hi - lo);
    let abs_half_len = half_len.abs();

    let fc = f(center);
    let mut result_gauss = fc * R::lit(WG[3]);
    let mut result_kronrod = fc * R::lit(WGK[7]);
    let mut result_abs = result_kronrod.abs();
    let mut fv1 = [R::zero(); 7];
    let mut fv2 = [R::zero(); 7];

    for j in 0..7 {
        let dx = half_len * R::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = R::lit(WGK[j]);
        result_kronrod = result_kronrod + wk * (f1 + f2);
        result_abs = result_abs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss = result_gauss + R::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = result_kronrod * half;
    let mut result_asc = R::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        result_asc = result_asc + R::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = result_kronrod * half_len;
    result_abs = result_abs * abs_half_len;
    result_asc = result_asc * abs_half_len;
    let mut error = ((result_kronrod - result_gauss) * half_len).abs();
    if result_asc != R::zero() && error != R::zero() {
        let scale = (R::lit(200.0) * error / result_asc).powf(R::lit(1.5));
        error = result_asc * scale.min(R::one());
    }
    let round_off = R::lit(50.0) * R::epsilon() * result_abs;
    if round_off > R::min_positive_value() {
        error = error.max(round_off);
    }

    Panel { lo, hi, value, error }
}

/// Integrates `f` over the finite interval `[lo, hi]`.
pub fn integrate<R, F>(f: F, lo: R, hi: R, settings: &QuadratureSettings<R>) -> Result<Estimate<R>>
where
    R: Real,
    F: Fn(R) -> R,
{
    settings.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::invalid("bounds", "finite bounds required"));
    }
    if lo == hi {
        return Ok(Estimate {
            value: R::zero(),
            error: R::zero(),
            subdivisions: 0,
        });
    }
    if lo > hi {
        let mut est = integrate(f, hi, lo, settings)?;
        est.value = -est.value;
        return Ok(est);
    }

    let first = kronrod15(&f, lo, hi);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;

    loop {
        let target = settings.abs_tol.max(settings.rel_tol * total.abs());
        if total_err <= target {
            return Ok(Estimate {
                value: total,
                error: total_err,
                subdivisions,
            });
        }
        if subdivisions >= settings.max_subdivisions {
            return Err(Error::Quadrature {
                achieved: total_err.as_f64(),
                requested: target.as_f64(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = R::lit(0.5) * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Interval cannot be split further in this precision.
            return Err(Error::Quadrature {
                achieved: total_err.as_f64(),
                requested: target.as_f64(),
            });
        }
        let left = kronrod15(&f, worst.lo, mid);
        let right = kronrod15(&f, mid, worst.hi);
        total = total - worst.value + left.value + right.value;
        total_err = total_err - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;

        // Re-sum occasionally so cancellation in the running totals cannot drift.
        if subdivisions % 32 == 0 {
            total = heap.iter().fold(R::zero(), |acc, p| acc + p.value);
            total_err = heap.iter().fold(R::zero(), |acc, p| acc + p.error);
        }
    }
}

/// Integrates `f` over `[lo, ∞)` after mapping the tail onto `[0, 1)`.
pub fn integrate_to_infinity<R, F>(f: F, lo: R, settings: &QuadratureSettings<R>) -> Result<Estimate<R>>
where
    R: Real,
    F: Fn(R) -> R,
{
    integrate_to_infinity_scaled(f, lo, R::one(), settings)
}

/// [`integrate_to_infinity`] with the map stretched by `scale`, which should be the
/// length over which `f` varies (`x = lo + scale·u/(1-u)` for the rational rule).
pub fn integrate_to_infinity_scaled<R, F>(
    f: F,
    lo: R,
    scale: R,
    settings: &QuadratureSettings<R>,
) -> Result<Estimate<R>>
where
    R: Real,
    F: Fn(R) -> R,
{
    if !(scale > R::zero()) || !scale.is_finite() {
        return Err(Error::invalid("scale", "must be positive and finite"));
    }
    let one = R::one();
    match settings.tail {
        TailRule::Rational => integrate(
            |u: R| {
                let w = one - u;
                let jac = scale / (w * w);
                let x = lo + scale * u / w;
                let y = f(x) * jac;
                if y.is_finite() {
                    y
                } else {
                    R::zero()
                }
            },
            R::zero(),
            one,
            settings,
        ),
        TailRule::Exponential => integrate(
            |u: R| {
                let w = one - u;
                let x = lo - scale * w.ln();
                let y = f(x) * scale / w;
                if y.is_finite() {
                    y
                } else {
                    R::zero()
                }
            },
            R::zero(),
            one,
            settings,
        ),
    }
}

/// Runs `body` with an integrand that may fail; the first failure aborts the result.
fn with_fallible<R, F, G>(f: F, body: G) -> Result<Estimate<R>>
where
    R: Real,
    F: Fn(R) -> Result<R>,
    G: FnOnce(&dyn Fn(R) -> R) -> Result<Estimate<R>>,
{
    let failure = std::cell::RefCell::new(None);
    let wrapped = |x: R| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            R::zero()
        }
    };
    let est = body(&wrapped);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => est,
    }
}

/// Integrates over `[lo, hi]` as separate panels split at `breaks` (ignored if outside).
pub fn integrate_with_breaks<R, F>(
    f: F,
    lo: R,
    hi: R,
    breaks: &[R],
    settings: &QuadratureSettings<R>,
) -> Result<Estimate<R>>
where
    R: Real,
    F: Fn(R) -> R,
{
    let mut edges = vec![lo];
    let mut inner: Vec<R> = breaks.iter().copied().filter(|b| *b > lo && *b < hi).collect();
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    edges.extend(inner);
    edges.push(hi);
    let mut total = Estimate {
        value: R::zero(),
        error: R::zero(),
        subdivisions: 0,
    };
    for w in edges.windows(2) {
        let part = integrate(&f, w[0], w[1], settings)?;
        total.value = total.value + part.value;
        total.error = total.error + part.error;
        total.subdivisions += part.subdivisions;
    }
    Ok(total)
}

/// [`integrate`] for an integrand that can fail.
pub fn try_integrate<R, F>(f: F, lo: R, hi: R, settings: &QuadratureSettings<R>) -> Result<Estimate<R>>
where
    R: Real,
    F: Fn(R) -> Result<R>,
{
    with_fallible(f, |g| integrate(g, lo, hi, settings))
}

/// [`integrate_to_infinity`] for an integrand that can fail.
pub fn try_integrate_to_infinity<R, F>(f: F, lo: R, settings: &QuadratureSettings<R>) -> Result<Estimate<R>>
where
    R: Real,
    F: Fn(R) -> Result<R>,
{
    with_fallible(f, |g| integrate_to_infinity(g, lo, settings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let s = QuadratureSettings::<f64>::default();
        let est = integrate(
            |x: f64| 7.0 * x.powi(4) + 2.0 * x.powi(3) - 11.0 * x * x + 15.0 * x + 1.0,
            -3.0,
            10.0,
            &s,
        )
        .unwrap();
        let antider = |x: f64| 7.0 / 5.0 * x.powi(5) + 0.5 * x.powi(4) - 11.0 / 3.0 * x.powi(3) + 7.5 * x * x + x;
        let exact = antider(10.0) - antider(-3.0);
        assert!((est.value - exact).abs() < 1e-9 * exact.abs());
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let s = QuadratureSettings::<f64>::default();
        let a = integrate(f64::sin, 0.0, 2.0, &s).unwrap().value;
        let b = integrate(f64::sin, 2.0, 0.0, &s).unwrap().value;
        assert_eq!(a, -b);
        assert!((a - (1.0 - 2.0_f64.cos())).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let s = QuadratureSettings::<f64>::default();
        let est = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &s).unwrap();
        assert!((est.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn semi_infinite_tails() {
        for tail in [TailRule::Rational, TailRule::Exponential] {
            let s = QuadratureSettings::<f64> {
                tail,
                ..Default::default()
            };
            let gauss = integrate_to_infinity(|x: f64| (-x * x).exp(), 0.0, &s).unwrap();
            assert!(
                (gauss.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10,
                "{tail:?}"
            );
            let decay = integrate_to_infinity(|x: f64| (-2.0 * x).exp(), 1.0, &s).unwrap();
            assert!((decay.value - 0.5 * (-2.0f64).exp()).abs() < 1e-12, "{tail:?}");
        }
        let s = QuadratureSettings::<f64>::default();
        let lorentz = integrate_to_infinity(|x: f64| 1.0 / (1.0 + x * x), 1.0, &s).unwrap();
        assert!((lorentz.value - std::f64::consts::FRAC_PI_4).abs() < 1e-9);
    }

    #[test]
    fn scaled_tail_resolves_narrow_mass() {
        let s = QuadratureSettings::<f64>::default();
        let width = 1e-4;
        let est = integrate_to_infinity_scaled(|x: f64| (-x / width).exp(), 0.0, width, &s).unwrap();
        assert!((est.value - width).abs() < 1e-9 * width);
    }

    #[test]
    fn breaks_catch_a_hidden_spike() {
        let s = QuadratureSettings::<f64>::default();
        let spike = |x: f64| 1.0 / (1.0 + ((x - 1e-4) / 1e-6).powi(2));
        let exact = 1e-6 * ((1.0 - 1e-4) / 1e-6_f64).atan() + 1e-6 * (1e-4 / 1e-6_f64).atan();
        let est = integrate_with_breaks(spike, 0.0, 1.0, &[1e-4, 5.0], &s).unwrap();
        assert!((est.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn f32_instantiation() {
        let s = QuadratureSettings::<f32>::default();
        let est = integrate(|x: f32| x.exp(), 0.0, 1.0, &s).unwrap();
        assert!((est.value - (std::f32::consts::E - 1.0)).abs() < 1e-5);
    }

    #[test]
    fn budget_exhaustion_reports_achieved_error() {
        let s = QuadratureSettings::<f64> {
            max_subdivisions: 2,
            rel_tol: 1e-14,
            abs_tol: 1e-300,
            ..Default::default()
        };
        let err = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &s).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn fallible_integrand_propagates_first_error() {
        let s = QuadratureSettings::<f64>::default();
        let err = try_integrate(
            |x: f64| {
                if x > 0.5 {
                    Err(Error::invalid("x", "too big"))
                } else {
                    Ok(x)
                }
            },
            0.0,
            1.0,
            &s,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "x", .. }));
        let ok = try_integrate_to_infinity(|x: f64| Ok((-x).exp()), 0.0, &s).unwrap();
        assert!((ok.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_settings() {
        let s = QuadratureSettings::<f64> {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate(|x: f64| x, 0.0, 1.0, &s).is_err());
    }
}
