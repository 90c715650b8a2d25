use minicone::constructions::{
    arctan_split, clifford_cone, lawson_cone_r4, pair_angle, product_arg_cone, quintic_cone_4n2, tkachev_cubic,
    tkachev_power_cone,
};
use minicone::exactpoly::Polynomial;
use minicone::scalarfield::ScalarField;
use minicone::verify::{sample_zero_set, verify_cone_symbolic, verify_field_numeric, Check, SamplerConfig};

fn cones() -> Vec<Polynomial> {
    vec![
        clifford_cone(),
        lawson_cone_r4(3).unwrap(),
        tkachev_cubic(2).unwrap(),
        tkachev_power_cone(2, 2).unwrap(),
        quintic_cone_4n2(1).unwrap(),
        product_arg_cone(&[1, 2]).unwrap(),
    ]
}

#[test]
fn certified_cones_pass_numeric_levelset_check() {
    for (i, p) in cones().iter().enumerate() {
        assert!(verify_cone_symbolic(p).unwrap().passed());
        let cfg = SamplerConfig::default().with_seed(i as u64).with_count(40);
        let r = verify_field_numeric(&ScalarField::from_poly(p), &[Check::LevelsetMinimal], &cfg, 1e-8).unwrap();
        assert!(r.passed(), "{p}: {}", r.to_json());
    }
}

#[test]
fn perturbed_cones_fail_both_ways() {
    for (i, p) in cones().iter().enumerate() {
        let n = p.nvars();
        let bent = p + &(&Polynomial::var(n, 0) * &Polynomial::var(n, 0));
        assert!(!verify_cone_symbolic(&bent).unwrap().passed(), "{bent}");
        let cfg = SamplerConfig::default().with_seed(i as u64).with_count(40);
        let r = verify_field_numeric(&ScalarField::from_poly(&bent), &[Check::LevelsetMinimal], &cfg, 1e-8).unwrap();
        assert!(!r.passed(), "{bent}");
    }
}

#[test]
fn arctan_chart_samples_lie_on_the_cubic() {
    let u = arctan_split(&pair_angle(2).unwrap());
    let cubic = tkachev_cubic(2).unwrap();
    let pts = sample_zero_set(&u, &SamplerConfig::default().with_seed(5).with_count(50)).unwrap();
    assert_eq!(pts.len(), 50);
    for z in &pts {
        let r = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        let val = cubic.eval_f64(z).unwrap();
        assert!(val.abs() <= 1e-9 * (1.0 + r).powi(3), "{val} at {z:?}");
    }
}
