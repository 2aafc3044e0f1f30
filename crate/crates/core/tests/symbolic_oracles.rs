use std::cmp::Ordering;

use fourier_pairs::symbolic::{
    epsilon, epsilon_f64, nth_prime, parse_rational, Frequency, SymbolicPosition,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `ε_n² = p_n / 4^n`.
fn eps_sq(n: u32) -> BigRational {
    if n == 0 {
        BigRational::zero()
    } else {
        BigRational::new(nth_prime(n).into(), BigInt::from(4).pow(n))
    }
}

fn sign(x: &BigRational) -> Ordering {
    x.cmp(&BigRational::zero())
}

/// Sign of `b + c·√u` with rational `b, c` and `u >= 0`, by squaring.
fn sign_plus_root(b: &BigRational, c: &BigRational, u: &BigRational) -> Ordering {
    let (sb, sc) = (
        sign(b),
        if u.is_zero() {
            Ordering::Equal
        } else {
            sign(c)
        },
    );
    if sc == Ordering::Equal {
        return sb;
    }
    if sb == Ordering::Equal || sb == sc {
        return sc;
    }
    // Opposite signs: compare b² with c²·u.
    match (b * b).cmp(&(c * c * u)) {
        Ordering::Greater => sb,
        Ordering::Less => sc,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Exact sign of `d + √u1 - √u2`, independent of the library's refinement.
fn sign_two_roots(d: &BigRational, u1: &BigRational, u2: &BigRational) -> Ordering {
    // T = d + √u1, compared with √u2 >= 0.
    let one = BigRational::from_integer(1.into());
    let st = sign_plus_root(d, &one, u1);
    if st != Ordering::Greater {
        // T <= 0 <= √u2.
        return if st == Ordering::Equal && u2.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Less
        };
    }
    // T > 0: sign(T² - u2) = sign(d² + u1 - u2 + 2d·√u1).
    let b = d * d + u1 - u2;
    let c = d * BigRational::from_integer(2.into());
    sign_plus_root(&b, &c, u1)
}

fn oracle_cmp(x: &SymbolicPosition, y: &SymbolicPosition) -> Ordering {
    let d = x.rational_part() - y.rational_part();
    sign_two_roots(&d, &eps_sq(x.class()), &eps_sq(y.class()))
}

#[test]
fn ordering_agrees_with_exact_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for i in 0..10_000 {
        let ca = rng.gen_range(0..7u32);
        let cb = rng.gen_range(0..7u32);
        let a = SymbolicPosition::new(q(rng.gen_range(-2000..2000), rng.gen_range(1..200)), ca);
        // Every other pair is a near collision: b's rational part cancels the
        // ε difference to within a random decimal truncation.
        let b = if i % 2 == 0 {
            SymbolicPosition::new(q(rng.gen_range(-2000..2000), rng.gen_range(1..200)), cb)
        } else {
            let digits = rng.gen_range(3..25u32);
            let target = a.to_f64() - epsilon_f64(cb);
            let scale = 10f64.powi(digits.min(15) as i32);
            let approx =
                parse_rational(&format!("{:.*}", digits.min(15) as usize, target)).unwrap();
            let nudge = q(rng.gen_range(-3..=3), 1) / BigRational::from_float(scale).unwrap();
            SymbolicPosition::new(approx + nudge, cb)
        };
        assert_eq!(a.cmp(&b), oracle_cmp(&a, &b), "{a} vs {b}");
        assert_eq!(b.cmp(&a), oracle_cmp(&b, &a), "{b} vs {a}");
    }
}

#[test]
fn epsilons_match_decimal_expansions() {
    assert_eq!(
        epsilon(1).decimal_string(30),
        "0.707106781186547524400844362104"
    );
    assert_eq!(
        epsilon(2).decimal_string(30),
        "0.433012701892219323381861585376"
    );
    assert_eq!(epsilon(3).decimal_string(20), "0.27950849718747371205");
    // ε_1 - ε_2 = √2/2 - √3/4.
    let d = epsilon(1).difference_f64(&epsilon(2), 128);
    assert!((d - 0.274_094_079_294_328_2).abs() < 1e-16);
    // Agrees with ε_1 to 21 digits, just below it.
    let near = SymbolicPosition::new(parse_rational("0.274094079294328201018").unwrap(), 2);
    assert!(near < epsilon(1));
    assert_eq!(oracle_cmp(&near, &epsilon(1)), Ordering::Less);
    let above = near.add_rational(&parse_rational("0.000000000000000000001").unwrap());
    assert!(above > epsilon(1));
}

#[test]
fn epsilons_strictly_decrease() {
    for n in 1..20 {
        assert!(epsilon(n + 1) < epsilon(n));
        assert!(epsilon(n) < SymbolicPosition::integer(1));
    }
}

#[test]
fn phase_of_modulation() {
    // e^{2πi·ε_1·x} at x = ε_1 has phase ε_1² = 1/2 turns.
    let f = Frequency::epsilon(1, false);
    assert!((f.phase_turns(&epsilon(1), 128) - 0.5).abs() < 1e-15);
    let g = Frequency::epsilon(1, true);
    assert!((g.phase_turns(&epsilon(1), 128) - 0.5).abs() < 1e-15);
    // Rational times rational is exact: (1/3)·(3/4) = 1/4.
    let h = Frequency::rational(q(1, 3));
    assert!((h.phase_turns(&SymbolicPosition::rational(q(3, 4)), 128) - 0.25).abs() < 1e-16);
}

fn position() -> impl Strategy<Value = SymbolicPosition> {
    (-10_000i64..10_000, 1i64..500, 0u32..8).prop_map(|(n, d, c)| SymbolicPosition::new(q(n, d), c))
}

proptest! {
    #[test]
    fn order_is_consistent(a in position(), b in position(), c in position()) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        prop_assert_eq!(a == b, a.cmp(&b) == Ordering::Equal);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        prop_assert_eq!(a.cmp(&b), oracle_cmp(&a, &b));
    }

    #[test]
    fn decimal_rendering_brackets_value(a in position()) {
        let s = a.decimal_string(40);
        let lo = parse_rational(&s).unwrap();
        let hi = &lo + BigRational::new(1.into(), BigInt::from(10).pow(40));
        // lo <= a < hi, checked exactly through the oracle.
        let lo_p = SymbolicPosition::rational(lo);
        let hi_p = SymbolicPosition::rational(hi);
        prop_assert!(oracle_cmp(&lo_p, &a) != Ordering::Greater);
        prop_assert!(oracle_cmp(&a, &hi_p) == Ordering::Less);
    }

    #[test]
    fn difference_is_accurate(a in position(), b in position()) {
        let d = a.difference_f64(&b, 128);
        let want = a.to_f64() - b.to_f64();
        prop_assert!((d - want).abs() <= 1e-12 * (1.0 + want.abs()));
        prop_assert!(d.is_sign_negative() == (a < b) || d == 0.0);
    }
}

#[test]
fn rational_parsing() {
    assert_eq!(parse_rational("-12.25").unwrap(), q(-49, 4));
    assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
    assert_eq!(parse_rational("7").unwrap(), q(7, 1));
    assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
    for bad in ["", "-", "1e3", "abc", "1/0", "1.2.3"] {
        assert!(parse_rational(bad).is_err(), "{bad:?}");
    }
    assert!(parse_rational("-0.0").unwrap().abs().is_zero());
}
