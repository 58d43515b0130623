//! Cross-validation of the Cartier kernel computation against the closed
//! formula layer on known example towers.

use asw::cartier::higher_anumbers;
use asw::profile::LambdaMode;
use asw::tower::TowerSpec;
use asw::Tower;
use num_traits::ToPrimitive;

fn build(text: &str) -> Tower {
    Tower::build(&TowerSpec::parse(text).unwrap()).unwrap()
}

#[test]
fn level_one_exact_anumber() {
    // p=5, d=4: a_1 = 4
    let tw = build("p=5\nlevels=1\nc 4 1\n");
    let (a, _) = higher_anumbers(&tw, 1, 1).unwrap();
    assert_eq!(a, vec![4]);
}

#[test]
fn level_two_exact_anumber() {
    // p=5, d=4: a_2 = 84
    let tw = build("p=5\nlevels=2\nc 4 1\n");
    let (a, prof) = higher_anumbers(&tw, 2, 1).unwrap();
    assert_eq!(a, vec![84]);
    assert_eq!(prof.genus, 196);
}

#[test]
fn table_one_x6() {
    // p=5, d=6, f = X^6: a_2^(3) = 213
    let tw = build("p=5\nlevels=2\nc 6 1\n");
    let (a, _) = higher_anumbers(&tw, 2, 3).unwrap();
    assert_eq!(a[2], 213, "full sequence {a:?}");
    // sandwich against the formula layer
    let f = tw
        .profile()
        .anumber_formula(3, 2, LambdaMode::Empirical(0))
        .unwrap();
    let value = f.value.to_u64().unwrap();
    assert!(a[2] <= value);
    assert!(f.lower <= num_rational::BigRational::from_integer(a[2].into()));
}

#[test]
fn extension_field_tower() {
    // y^2 + y = x^3 over F_4: genus 1 and a-number 1, same as over F_2;
    // exercises the semilinear (twisted) kernel path end to end.
    let tw = build("p=2\nnu=2\nmodulus=1,1,1\nlevels=1\nc 3 1\n");
    assert_eq!(tw.params().nu(), 2);
    let (a, prof) = higher_anumbers(&tw, 1, 2).unwrap();
    assert_eq!(prof.genus, 1);
    assert_eq!(a, vec![1, 1]);

    let tw2 = build("p=2\nnu=2\nmodulus=1,1,1\nlevels=2\nc 3 1 0\n");
    let (a2, prof2) = higher_anumbers(&tw2, 2, 3).unwrap();
    // the base-field tower has the same genus and kernel chain
    let tw2_base = build("p=2\nlevels=2\nc 3 1 0\n");
    let (a2_base, prof2_base) = higher_anumbers(&tw2_base, 2, 3).unwrap();
    assert_eq!(prof2.genus, prof2_base.genus);
    assert_eq!(a2, a2_base);
}

#[test]
fn extension_field_character_values() {
    // y^2 + y = x over F_4: chi(Frob_v) at v = x - u is (1+uT)(1+u^2 T),
    // i.e. (1+T)^Tr(u) modulo T^2.
    use asw::lfun::{char_value, frobenius_alpha};
    use asw::poly::PolyOverField;
    let tw = build("p=2\nnu=2\nmodulus=1,1,1\nlevels=1\nc 1 1\n");
    let fe = frobenius_alpha(&tw, 1, 8).unwrap();
    let k = tw.params();
    // roots of x^2 + x + 1 have trace 1; rational points have trace x + x^2
    for i in 0..4u64 {
        let u = k.elem_by_index(i);
        let place = PolyOverField::from_coeffs(k, &[u.neg(), k.one()]);
        let expect = u.add(&u.frobenius()).coords()[0]; // Tr_{F4/F2}(u)
        assert_eq!(char_value(&fe.alpha, &place).unwrap(), expect);
    }
}

#[test]
fn three_level_tower() {
    // Deepest supported Witt length: three levels at p=2, d=3. The kernel
    // chain must sit inside the formula sandwich at every iterate.
    use asw::profile::LambdaMode;
    use num_rational::BigRational;
    let tw = build("p=2\nlevels=3\nc 3 1\nc 1 0 1\n");
    assert_eq!(tw.lower_break(0), 3);
    let profile = tw.profile();
    for n in 1..=3usize {
        let (a, prof) = higher_anumbers(&tw, n, 4).unwrap();
        assert_eq!(
            prof.genus,
            profile.genus(n as u32).to_u64().unwrap(),
            "genus mismatch at level {n}"
        );
        for r in 1..=4u64 {
            let f = profile
                .anumber_formula(r, n as u32, LambdaMode::Empirical(0))
                .unwrap();
            let a_r = BigRational::from_integer(a[r as usize - 1].into());
            let value = BigRational::from_integer(f.value.clone());
            assert!(a_r <= value, "upper bound fails at n={n} r={r}");
            assert!(f.lower <= a_r, "lower bound fails at n={n} r={r}");
            if f.exact {
                assert_eq!(a_r, value, "exact case missed at n={n} r={r}");
            }
        }
    }
}

#[test]
fn newton_hodge_sweep() {
    // Vertex coincidence at m = 0, -1 mod d below the trust bound, and full
    // polygon equality whenever d | p - 1, across a few shapes.
    use asw::lfun::{
        compare_np_hp, fredholm_coefficients, fredholm_newton_polygon, frobenius_alpha,
        nuclear_matrix,
    };
    for (text, t) in [
        ("p=2\nlevels=2\nc 3 1 0\n", 14usize), // d = 3, p = 2
        ("p=3\nlevels=2\nc 4 1\n", 20),        // d = 4, p = 3
        ("p=5\nlevels=2\nc 2 1\nc 1 3\n", 14), // d = 2 | p - 1: full equality
    ] {
        let tw = build(text);
        let n = tw.levels();
        let (p, d) = (tw.p(), tw.d());
        let nu = tw.params().nu();
        let fe = frobenius_alpha(&tw, n, (p.pow(nu as u32) as usize * t) as u32).unwrap();
        let matrix = nuclear_matrix(&fe, t).unwrap();
        let fred = fredholm_coefficients(&matrix);
        let np = fredholm_newton_polygon(&fred, p, d, n, nu);
        let full = (p - 1) % d == 0;
        let report = compare_np_hp(&np, p, d, full);
        assert!(
            report.all_pass(),
            "{text:?}: {:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert!(
            !report.items.is_empty(),
            "{text:?}: no certified vertices below the trust bound"
        );
    }
}
