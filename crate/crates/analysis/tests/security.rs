use kcx_analysis::security::*;
use kcx_protocols::{suite_by_name, Attack, Instance};

fn estimate(name: &str, instance: Instance, attack: Attack) -> AttackEstimate {
    let s = suite_by_name(name).unwrap();
    let (_, inst, model) = suite_instances(s).into_iter().find(|(i, _, _)| *i == instance).unwrap();
    let (p, d) = security_estimate(&inst, model);
    match attack {
        Attack::Primal => p.unwrap(),
        Attack::Dual => d.unwrap(),
    }
}

fn near(x: u32, y: u32) -> bool {
    x.abs_diff(y) <= 2
}

#[test]
fn lwr_recommended_dual() {
    let e = estimate("lwr-recommended", Instance::Lwr, Attack::Dual);
    assert!(near(e.m, 631) && near(e.b, 458), "{e:?}");
    assert!(near(e.cost[0], 142) && near(e.cost[1], 130) && near(e.cost[2], 103), "{e:?}");
}

#[test]
fn lwr_recommended_primal() {
    let e = estimate("lwr-recommended", Instance::Lwr, Attack::Primal);
    assert!(near(e.b, 461) && near(e.cost[1], 131), "{e:?}");
}

#[test]
fn zarzar_primal() {
    let e = estimate("zarzar", Instance::Lwe, Attack::Primal);
    assert!(near(e.b, 491) && near(e.cost[1], 130), "{e:?}");
}

#[test]
fn hybrid_has_two_instances() {
    let s = suite_by_name("hybrid-recommended").unwrap();
    let inst = suite_instances(s);
    assert_eq!(inst.len(), 2);
    assert_eq!((inst[0].1.n, inst[0].1.max_samples), (712, 704));
    assert_eq!((inst[1].1.n, inst[1].1.max_samples), (704, 720));
}

#[test]
fn rounding_variance() {
    assert!((rounding_var(1 << 15, 1 << 12) - 64.0 / 12.0).abs() < 1e-12);
    assert_eq!(rounding_var(16, 16), 0.0);
}

#[test]
fn harder_instances_need_larger_blocks() {
    let base = LweInstance { n: 300, q: 2048.0, var_s: 2.0, var_e: 2.0, max_samples: 600 };
    let b = |i: &LweInstance| primal(i, CostModel::MATRIX).unwrap().b;
    let wider = LweInstance { n: 360, max_samples: 720, ..base };
    let noisier = LweInstance { var_s: 4.0, var_e: 4.0, ..base };
    assert!(b(&wider) > b(&base));
    assert!(b(&noisier) > b(&base));
    let d = |i: &LweInstance| dual(i, CostModel::MATRIX).unwrap().raw[0];
    assert!(d(&wider) > d(&base));
}

#[test]
fn post_reduction_never_exceeds_raw() {
    let e = estimate("lwe-recommended", Instance::Lwe, Attack::Primal);
    let post = e.post_reduction(1000, 500.0, 1.0000001);
    for i in 0..3 {
        assert!(post[i] <= e.cost[i]);
    }
    assert_eq!(e.post_reduction(0, 1e12, 1.0), e.cost);
}
