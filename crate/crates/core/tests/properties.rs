use proptest::prelude::*;
use ramacf::algid::min_poly;
use ramacf::cfrac::{self, eval_cf};
use ramacf::harness::{run_identity, run_suite, Category, ParamMap, Status};
use ramacf::hypergeom::{appell_f1, gauss_2f1};
use ramacf::modular::modular_point;
use ramacf::numerics::{character, divisor_sum_chi, CharModulus};
use ramacf::qseries::{
    dedekind_eta, euler_f, log_rstar_series, m_series, product_form, theta2, theta3, theta4,
    ProductSpec,
};
use ramacf::PrecisionContext;
use rug::{Float, Integer, Rational};

const BITS: u32 = 256;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(BITS).unwrap()
}

/// Agreement to `2^-BITS`, relative once `|b| > 1`. Values are computed
/// with guard bits, so this is the working tolerance.
fn close(a: &Float, b: &Float, ctx: &PrecisionContext) -> bool {
    let scale = Float::with_val(ctx.internal_bits(), b.abs_ref()).max(&ctx.float(1));
    Float::with_val(ctx.internal_bits(), a - b).abs() <= ctx.pow2(-(BITS as i32)) * scale
}

/// `Σ_{k∈ℤ} (−1)^k q^{k(3k−1)/2}` summed directly.
fn pentagonal_sum(q: &Float, ctx: &PrecisionContext) -> Float {
    let mut total = ctx.float(1);
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let mut step = ctx.float(0);
        for e in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            step += ctx.float(q.pow_i(e as i32)) * sign;
        }
        total += &step;
        if step.is_zero() || Float::with_val(ctx.internal_bits(), step.abs_ref()) < ctx.negligible() {
            return total;
        }
        k += 1;
    }
}

trait PowI {
    fn pow_i(&self, e: i32) -> Float;
}

impl PowI for Float {
    fn pow_i(&self, e: i32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(e))
    }
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..40, 1i64..12).prop_map(|(n, d)| Rational::from((n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pentagonal_number_theorem(q in 0.001f64..0.9) {
        let ctx = ctx().elevated();
        let q = ctx.float(q);
        let product = euler_f(&q, &ctx).unwrap();
        prop_assert!(close(product.as_float(), &pentagonal_sum(&q, &ctx), &ctx));
    }

    #[test]
    fn log_series_matches_product(x in 0.2f64..12.0) {
        let ctx = ctx().elevated();
        let q = ctx.float(-x).exp();
        let series = ctx.float(log_rstar_series(&q, &ctx).unwrap().as_float()).exp();
        let product = product_form(&ProductSpec::rogers_ramanujan_star(), &q, &ctx).unwrap();
        prop_assert!(close(&series, product.as_float(), &ctx));
    }

    #[test]
    fn cubic_product_forms_agree(q in 0.001f64..0.9) {
        let ctx = ctx().elevated();
        let q = ctx.float(q);
        let a = product_form(&ProductSpec::cubic(), &q, &ctx).unwrap();
        let b = product_form(&ProductSpec::cubic_alt(), &q, &ctx).unwrap();
        prop_assert!(close(a.as_float(), b.as_float(), &ctx));
    }

    #[test]
    fn appell_reduces_on_axes(
        a in unit_rational(),
        b1 in unit_rational(),
        b2 in unit_rational(),
        c in unit_rational(),
        z in -0.9f64..0.9,
    ) {
        let ctx = ctx().elevated();
        let z = ctx.float(z);
        let zero = ctx.float(0);
        let on_x = appell_f1(&a, &b1, &b2, &c, &z, &zero, &ctx).unwrap();
        let g1 = gauss_2f1(&a, &b1, &c, &z, &ctx).unwrap();
        prop_assert!(close(on_x.as_float(), g1.as_float(), &ctx));
        let on_y = appell_f1(&a, &b1, &b2, &c, &zero, &z, &ctx).unwrap();
        let g2 = gauss_2f1(&a, &b2, &c, &z, &ctx).unwrap();
        prop_assert!(close(on_y.as_float(), g2.as_float(), &ctx));
    }

    #[test]
    fn eta_functional_equation(t in 0.05f64..20.0) {
        let ctx = ctx().elevated();
        let t = ctx.float(t);
        let lhs = dedekind_eta(&ctx.float(t.recip_ref()), &ctx).unwrap();
        let rhs = dedekind_eta(&t, &ctx).unwrap().into_float() * ctx.float(t.sqrt_ref());
        prop_assert!(close(lhs.as_float(), &rhs, &ctx));
    }

    #[test]
    fn jacobi_quartic(q in 0.001f64..0.95) {
        let ctx = ctx().elevated();
        let q = ctx.float(q);
        let fourth = |v: Float| v.square().square();
        let lhs = fourth(theta3(&q, &ctx).unwrap().into_float());
        let rhs = fourth(theta2(&q, &ctx).unwrap().into_float()) + fourth(theta4(&q, &ctx).unwrap().into_float());
        prop_assert!(close(&lhs, &rhs, &ctx));
    }

    #[test]
    fn rr_fraction_matches_product(q in 0.001f64..0.8) {
        let ctx = ctx().elevated();
        let q = ctx.float(q);
        let cf = eval_cf(&cfrac::rr(&q, &ctx).unwrap(), &ctx).unwrap().value;
        let p = product_form(&ProductSpec::rogers_ramanujan(), &q, &ctx).unwrap();
        prop_assert!(close(cf.as_float(), p.as_float(), &ctx));
    }

    #[test]
    fn m_fraction_matches_series(c in 0.1f64..4.0, q in 0.01f64..0.6) {
        let ctx = ctx().elevated();
        let (c, q) = (ctx.float(c), ctx.float(q));
        let cf = eval_cf(&cfrac::m_cf_alt(&c, &q, &ctx).unwrap(), &ctx).unwrap().value;
        let s = m_series(&c, &q, &ctx).unwrap();
        prop_assert!(close(cf.as_float(), s.as_float(), &ctx));
    }

    #[test]
    fn complementary_moduli(n in 1i64..40, d in 1i64..8) {
        let ctx = ctx().elevated();
        let p = modular_point(&Rational::from((n, d)), &ctx).unwrap();
        let s = ctx.float(p.k.as_float().square_ref()) + ctx.float(p.k_prime.as_float().square_ref());
        prop_assert!(close(&s, &ctx.float(1), &ctx));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// A quadratic surd `(a + √b)/c` has the same minimal polynomial at any
    /// precision that resolves it.
    #[test]
    fn min_poly_is_precision_invariant(a in -20i64..20, b in 2u32..60, c in 1i64..10) {
        prop_assume!((b as f64).sqrt().fract() != 0.0);
        let value = move |ctx: &PrecisionContext| Ok(ctx.finish((ctx.float(b).sqrt() + a) / c));
        let low = min_poly(value, 4, &PrecisionContext::new(256).unwrap()).unwrap().unwrap();
        let high = min_poly(value, 4, &PrecisionContext::new(384).unwrap()).unwrap().unwrap();
        prop_assert!(low.confirmed && high.confirmed);
        prop_assert_eq!(low.degree, 2);
        prop_assert_eq!(&low.coefficients, &high.coefficients);
        // c²x² − 2acx + (a² − b)
        let expected = [Integer::from(a * a - b as i64), Integer::from(-2 * a * c), Integer::from(c * c)];
        let g = expected.iter().fold(Integer::new(), |g, v| g.gcd(v));
        let mut expected: Vec<Integer> = expected.iter().map(|v| Integer::from(v / &g)).collect();
        if expected[2] < 0 {
            expected.iter_mut().for_each(|v| *v = -v.clone());
        }
        prop_assert_eq!(low.coefficients, expected);
    }
}

#[test]
fn divisor_sums_match_enumeration() {
    for modulus in [CharModulus::Three, CharModulus::Five] {
        let m = modulus.value() as i64;
        let chi = |d: i64| match (m, d % m) {
            (3, 1) | (5, 1) | (5, 4) => 1,
            (3, 2) | (5, 2) | (5, 3) => -1,
            _ => 0,
        };
        for n in 1..=1000i64 {
            let brute: i64 = (1..=n).filter(|d| n % d == 0).map(|d| chi(d) * d).sum();
            assert_eq!(divisor_sum_chi(n as u64, modulus), brute, "n = {n}, modulus {m}");
            assert_eq!(character(n as u64, modulus) as i64, chi(n));
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let ctx = ctx();
    let first = serde_json::to_string(&run_suite(Some(Category::FunctionalEquation), &ctx)).unwrap();
    let second = serde_json::to_string(&run_suite(Some(Category::FunctionalEquation), &ctx)).unwrap();
    assert_eq!(first, second);
}

#[test]
fn raising_precision_keeps_passes() {
    let smoke = [
        "rr-closed-form-2pi",
        "eq2-qexp-pi",
        "eq3-q0p1",
        "eq4-functional",
        "k-singular-r1",
        "cf-m-plus-c2-q0p5",
        "rr-derivative-2pi-product",
        "eta4-ftc-y1",
    ];
    for name in smoke {
        let mut passed_below = false;
        for bits in [128, 256, 512] {
            let r = run_identity(name, &ParamMap::new(), &PrecisionContext::new(bits).unwrap()).unwrap();
            assert!(!(passed_below && r.status != Status::Pass), "{name} flipped at {bits} bits: {r:?}");
            passed_below |= r.status == Status::Pass;
        }
        assert!(passed_below, "{name} never passed");
    }
}
