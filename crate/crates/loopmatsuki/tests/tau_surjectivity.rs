//! For epsilon = -1 every theta-side class with |lambda_i| <= 2 is hit by
//! gamma -> gamma theta(gamma)^-1. The preimages below were found by a seeded search over
//! small Laurent matrices and are checked exactly here.

use std::collections::BTreeSet;

use loopmatsuki::canonical::{canonicalize_theta, tau_theta};
use loopmatsuki::group::{build_datum, Family};
use loopmatsuki::io::laurent_matrix_from_strings;
use loopmatsuki::spherical::{classify_theta, enumerate_admissible};

type Fixture = (&'static [i64], &'static str, [&'static str; 4]);

const SPLIT: &[Fixture] = &[
    (&[2, -2], "Sym1,Sym1", ["1/2*t^-1", "2", "i", "i*t"]),
    (&[0, -2], "Sym1,Sym1", ["1/2*t^-1", "1/2", "0", "1/2"]),
    (&[2, 0], "Sym1,Sym1", ["i*t", "-1", "t", "-1"]),
    (&[0, 0], "Sym2", ["1", "0", "0", "1"]),
    (&[2, 2], "Sym2", ["2*t", "i*t^2", "0", "-t"]),
    (&[-2, -2], "Sym2", ["2*t^-1 + i", "i", "2*t^-1", "2*t^-1"]),
    (&[-1, -1], "Alt2", ["i*t^-1 + -t", "-t^-1", "i*t^2", "i"]),
    (&[1, 1], "Alt2", ["t", "1/2*t", "1", "i"]),
];

const QUATERNIONIC: &[Fixture] = &[
    (&[-1, -1], "Sym2", ["1/2*t^-1", "5/2*t", "i*t^-2", "i"]),
    (&[1, 1], "Sym2", ["1/2+1*i*t", "i*t^-1", "-1/2*t^2", "-1"]),
    (&[1, -1], "Sym1,Sym1", ["1/2*t^-1", "2", "i", "i*t"]),
    (&[-2, -2], "Alt2", ["2*t^-2 + 2", "2", "-1", "-1"]),
    (&[2, 2], "Alt2", ["0", "i", "-t^2", "-2*t"]),
    (&[0, 0], "Alt2", ["i*t", "-1 + i*t^2", "-1", "-t"]),
];

const UNITARY: &[Fixture] = &[
    (&[0, 0], "sig(0,2)", ["0", "t", "-t^3", "0"]),
    (&[0, 0], "sig(1,1)", ["t", "0", "-1", "1"]),
    (&[0, 0], "sig(2,0)", ["t^3", "-1", "t^2", "0"]),
    (&[1, -1], "pair1", ["-t^2", "0", "t", "-t^2"]),
    (&[2, -2], "pair1", ["t^3", "0", "t", "-1"]),
];

fn check_family(family: Family, fixtures: &[Fixture]) {
    let d = build_datum(family, 2, -1, None).unwrap();
    let mut hit = BTreeSet::new();
    for (lambda, label, entries) in fixtures {
        let rows = vec![vec![entries[0].to_string(), entries[1].to_string()], vec![entries[2].to_string(), entries[3].to_string()]];
        let gamma = laurent_matrix_from_strings(&rows).unwrap();
        let x = tau_theta(&d, &gamma, 16).unwrap();
        let cf = canonicalize_theta(&d, &x).unwrap();
        assert_eq!((cf.lambda.as_slice(), cf.class.label.as_str()), (*lambda, *label), "preimage {entries:?}");
        hit.insert((cf.lambda, cf.class.label));
    }
    let mut all = BTreeSet::new();
    for cw in enumerate_admissible(&d, 2).unwrap() {
        for c in classify_theta(&d, &cw).unwrap() {
            all.insert((cw.lambda.clone(), c.label));
        }
    }
    assert_eq!(hit, all);
}

#[test]
fn split_classes_all_hit() {
    check_family(Family::SplitGl, SPLIT);
}

#[test]
fn quaternionic_classes_all_hit() {
    check_family(Family::QuaternionicGl, QUATERNIONIC);
}

#[test]
fn unitary_classes_all_hit() {
    check_family(Family::Unitary, UNITARY);
}
