use brickwork::exact::rational;
use brickwork::series::{
    calibrate_normalization, coefficient_table, hurwitz_sum_coefficient, moment_coefficient, ExponentRule, ModelSpec,
    Repr,
};
use brickwork::{Error, ErrorKind, Partition};

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

#[test]
fn spec_anchor_coefficients() {
    let one = ModelSpec::hermitian(3, 1).unwrap();
    let two = ModelSpec::hermitian(3, 2).unwrap();
    assert_eq!(moment_coefficient(&one, &p("2")).unwrap(), rational(9, 2));
    assert_eq!(moment_coefficient(&two, &p("2")).unwrap(), rational(1, 2));
    assert_eq!(hurwitz_sum_coefficient(&one, &p("1,1"), false).unwrap(), rational(9, 2));
}

#[test]
fn the_literal_rule_is_wrong_for_some_mu() {
    // With α independent of μ the two degree-2 monomials need different powers of N.
    let literal = ModelSpec::hermitian(3, 1).unwrap().with_rule(ExponentRule::hypothesis(1));
    let m = moment_coefficient(&literal, &p("1,1")).unwrap();
    assert_ne!(hurwitz_sum_coefficient(&literal, &p("1,1"), false).unwrap(), m);
    assert_eq!(
        hurwitz_sum_coefficient(&literal, &p("2"), false).unwrap(),
        moment_coefficient(&literal, &p("2")).unwrap()
    );
}

#[test]
fn calibration_report_is_deterministic() {
    let a = calibrate_normalization(2, 2, &[5, 3, 4]).unwrap();
    let b = calibrate_normalization(2, 2, &[3, 4, 5]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.sizes, vec![3, 4, 5]);
    assert_eq!(a.rows.len(), 3 * (2 + 5));
}

#[test]
fn window_errors_are_limits() {
    let model = ModelSpec::hermitian(2, 1).unwrap();
    let err = coefficient_table(&model, 4, &[Repr::Hurwitz], false).unwrap_err();
    assert!(matches!(err, Error::OutsideValidityWindow { degree: 4, n: 2 }));
    assert_eq!(err.kind(), ErrorKind::Limit);
    assert!(coefficient_table(&model, 4, &[Repr::Hurwitz], true).is_ok());
}
