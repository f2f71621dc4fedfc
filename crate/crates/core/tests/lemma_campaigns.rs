use loopforge::surgery::{
    bilipschitz_instances, check_bilipschitz_growth, check_oscillation_growth, check_type_one_pieces,
    check_type_two_pieces, oscillation_instances, type_one_instances, type_two_instances, BallGrowthSampling,
};

const COUNT: usize = 8;

#[test]
fn bilipschitz_curves() {
    let s = BallGrowthSampling::default();
    for (name, c) in bilipschitz_instances(COUNT, 1) {
        let r = check_bilipschitz_growth(&c, &s).unwrap();
        println!("{name}: {} <= {}", r.value, r.bound);
        assert!(r.passed, "{name}: {r:?}");
    }
}

#[test]
fn oscillation_curves() {
    let s = BallGrowthSampling::default();
    for (name, c) in oscillation_instances(COUNT, 2) {
        let r = check_oscillation_growth(&c, &s).unwrap();
        println!("{name}: {} <= {}", r.value, r.bound);
        assert!(r.passed, "{name}: {r:?}");
    }
}

#[test]
fn type_one_pieces() {
    let s = BallGrowthSampling::default();
    for (name, c, eps) in type_one_instances(COUNT, 3) {
        for r in check_type_one_pieces(&c, eps, &s).unwrap() {
            println!("{name}: {} <= {}", r.value, r.bound);
            assert!(r.passed, "{name}: {r:?}");
        }
    }
}

#[test]
fn type_two_pieces() {
    let s = BallGrowthSampling::default();
    for (name, c, eps) in type_two_instances(COUNT, 4) {
        for r in check_type_two_pieces(&c, eps, &s).unwrap() {
            println!("{name}: {} <= {}", r.value, r.bound);
            assert!(r.passed, "{name}: {r:?}");
        }
    }
}
