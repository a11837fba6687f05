use std::collections::BTreeSet;

use itertools::Itertools;
use schutz_core::checker::{check_all, unreachable_from, unreachable_via, AxiomId, DesignatedPair, Mode};
use schutz_core::model::{
    check_theorem, coord_betw, generate_sample, int, oracle_unreachable, prolong, rat, Coord, GenConfig, ModelLine,
    ModelPoint, ModelSample, Rational, Theorem,
};
use schutz_core::order::saturate;
use schutz_core::structure::{ev, EventId};

/// A sample from explicit points and lines, with a connector line added for
/// every timelike pair of points that no listed line joins.
fn sample(points: &[(&str, Rational, Rational)], lines: &[(&str, &str, &str)]) -> ModelSample {
    let points: Vec<ModelPoint> = points
        .iter()
        .map(|(n, t, x)| ModelPoint { id: ev(n), t: t.clone(), x: x.clone() })
        .collect();
    let coord = |n: &str| points.iter().find(|p| p.id.as_str() == n).unwrap().coord();
    let mut ls: Vec<ModelLine> = lines
        .iter()
        .map(|(name, p, q)| ModelLine::through(*name, &coord(p), &coord(q)).unwrap())
        .collect();
    let mut k = 0;
    for (p, q) in points.iter().tuple_combinations() {
        let (pc, qc) = (p.coord(), q.coord());
        if pc.timelike_to(&qc) && !ls.iter().any(|l| l.contains(&pc) && l.contains(&qc)) {
            ls.push(ModelLine::through(format!("K{k}"), &pc, &qc).unwrap());
            k += 1;
        }
    }
    let incidence = ls
        .iter()
        .map(|l| {
            let mut v: Vec<usize> = (0..points.len()).filter(|&i| l.contains(&points[i].coord())).collect();
            v.sort_by(|&a, &b| points[a].t.cmp(&points[b].t));
            v
        })
        .collect();
    ModelSample {
        points,
        lines: ls,
        incidence,
        designated: vec![],
        bound: int(10),
    }
}

/// Coordinates scaled to a common denominator, as integers.
fn integer_coords(ms: &ModelSample) -> Vec<(i128, i128)> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let mut l = num_bigint::BigInt::from(1);
    for p in &ms.points {
        l = l.lcm(p.t.denom()).lcm(p.x.denom());
    }
    let scale = Rational::from_integer(l);
    ms.points
        .iter()
        .map(|p| {
            let t = (&p.t * &scale).to_integer().to_i128().unwrap();
            let x = (&p.x * &scale).to_integer().to_i128().unwrap();
            (t, x)
        })
        .collect()
}

fn int_betw((at, ax): (i128, i128), (bt, bx): (i128, i128), (ct, cx): (i128, i128)) -> bool {
    let timelike = (ct - at).pow(2) > (cx - ax).pow(2);
    let collinear = (bt - at) * (cx - ax) == (bx - ax) * (ct - at);
    timelike && collinear && ((at < bt && bt < ct) || (ct < bt && bt < at))
}

#[test]
fn coordinate_betweenness_equals_saturated_betweenness() {
    for seed in 0..3 {
        let (ms, s) = generate_sample(&GenConfig::new(4, seed, int(10))).unwrap();
        let sb = saturate(&s);
        let xy = integer_coords(&ms);
        let idx: Vec<usize> = ms.points.iter().map(|p| sb.index_of(&p.id).unwrap()).collect();
        for a in 0..xy.len() {
            for b in 0..xy.len() {
                for c in 0..xy.len() {
                    assert_eq!(
                        int_betw(xy[a], xy[b], xy[c]),
                        sb.holds_idx(idx[a], idx[b], idx[c]),
                        "seed {seed}: [{} {} {}]",
                        ms.points[a].id,
                        ms.points[b].id,
                        ms.points[c].id
                    );
                }
            }
        }
        // The library predicate agrees on every exported triple.
        for t in s.betw() {
            let pc = |e: &EventId| ms.point(e).unwrap().coord();
            assert!(coord_betw(&pc(&t.0), &pc(&t.1), &pc(&t.2)));
        }
    }
}

#[test]
fn generated_samples_pass_universal_axioms() {
    let axioms = [AxiomId::O1, AxiomId::O2, AxiomId::O3, AxiomId::O4, AxiomId::O5, AxiomId::I1, AxiomId::I3];
    for seed in 0..3 {
        let (ms, s) = generate_sample(&GenConfig::new(5, seed, int(10))).unwrap();
        let r = check_all(&s, Mode::WholeUniverse, &[], true, &axioms).unwrap();
        assert!(r.results.iter().all(|x| x.verdict == "PASS"), "{r:?}");
        let sampled = check_all(&s, Mode::Sampled, &ms.designated, true, &[]).unwrap();
        assert!(!sampled.any_fail());
        for x in &sampled.results {
            if matches!(x.axiom, AxiomId::I5 | AxiomId::I6 | AxiomId::I7) {
                assert_eq!(x.verdict, "PASS", "{}", x.axiom);
            }
        }
    }
}

#[test]
fn oracle_unreachable_agrees_with_structure() {
    for seed in 0..5 {
        let (ms, s) = generate_sample(&GenConfig::new(6, seed, int(10))).unwrap();
        for pair in &ms.designated {
            let b = ms.point(&pair.event).unwrap();
            assert_eq!(
                oracle_unreachable(&ms, &pair.path, b).unwrap(),
                unreachable_from(&s, s.path(&pair.path).unwrap(), &pair.event).unwrap().members
            );
        }
    }
}

#[test]
fn unreachable_from_on_time_axis() {
    let ms = sample(
        &[
            ("q0", int(-2), int(0)),
            ("q1", int(-1), int(0)),
            ("q2", rat(-1, 2), int(0)),
            ("q3", int(0), int(0)),
            ("q4", rat(1, 2), int(0)),
            ("q5", int(1), int(0)),
            ("q6", int(2), int(0)),
            ("b", int(0), int(1)),
        ],
        &[("Q", "q0", "q6")],
    );
    let s = ms.to_structure();
    let u = unreachable_from(&s, s.path("Q").unwrap(), &ev("b")).unwrap();
    let expected: BTreeSet<EventId> = ["q1", "q2", "q3", "q4", "q5"].iter().map(|n| ev(n)).collect();
    assert_eq!(u.members, expected);
}

#[test]
fn unreachable_via_reproduces_the_two_path_configuration() {
    // Q is the time axis, R has speed 1/2 through the origin x.
    let ms = sample(
        &[
            ("x", int(0), int(0)),
            ("qy", int(3), int(0)),
            ("qa", int(4), int(0)),
            ("q8", int(8), int(0)),
            ("rw", int(4), int(2)),
            ("r8", int(8), int(4)),
        ],
        &[("Q", "x", "q8"), ("R", "x", "r8")],
    );
    let s = ms.to_structure();
    let sb = saturate(&s);
    let (q, r) = (s.path("Q").unwrap(), s.path("R").unwrap());
    let got = unreachable_via(&s, q, &ev("qa"), r, &ev("x"), &sb).unwrap();
    assert!(got.contains(&ev("qy")));

    // Coordinate oracle for the same set.
    let pc = |n: &str| ms.point(&ev(n)).unwrap().coord();
    let oracle: BTreeSet<EventId> = q
        .members
        .iter()
        .filter(|y| coord_betw(&pc("x"), &pc(y.as_str()), &pc("qa")))
        .filter(|y| {
            r.members.iter().filter(|w| !q.contains(w)).any(|w| {
                !pc(w.as_str()).timelike_to(&pc("qa")) && !pc(w.as_str()).timelike_to(&pc(y.as_str()))
            })
        })
        .cloned()
        .collect();
    assert_eq!(got, oracle);

    // qa adjacent to x leaves nothing strictly between.
    assert!(unreachable_via(&s, q, &ev("qy"), r, &ev("x"), &sb).unwrap().is_empty());
}

#[test]
fn prolong_constructs_reachable_event_beyond_unreachable_one() {
    let mut ms = sample(
        &[("a", int(-2), int(0)), ("x", int(0), int(0)), ("b", int(0), int(1))],
        &[("Q", "a", "x")],
    );
    let c = prolong(&mut ms, &ev("a"), &ev("x")).unwrap();
    let cp = ms.point(&c).unwrap().coord();
    assert_eq!(cp, Coord::new(int(2), int(0)));
    let b = ms.point(&ev("b")).unwrap().coord();
    assert_eq!(cp.interval_sq(&b), int(3));
    assert!(coord_betw(&Coord::new(int(-2), int(0)), &Coord::new(int(0), int(0)), &cp));
    assert!(prolong(&mut ms, &ev("x"), &ev("b")).is_err());
}

#[test]
fn theorem_checks_on_generated_sample() {
    let (ms, _) = generate_sample(&GenConfig::new(6, 0, int(10))).unwrap();
    for thm in Theorem::ALL {
        let v = check_theorem(&ms, thm, 20, 0).unwrap();
        assert!(v.violations.is_empty(), "{thm}: {:?}", v.violations);
        assert!(v.checked > 0, "{thm}");
    }
}

#[test]
fn t14i_with_explicit_pair() {
    let mut ms = sample(
        &[
            ("y", int(-2), int(0)),
            ("q0", int(0), int(0)),
            ("z", int(3), int(0)),
            ("a", int(0), int(1)),
            ("b", rat(1, 2), int(2)),
        ],
        &[("Q", "y", "z")],
    );
    ms.designated = vec![
        DesignatedPair { path: "Q".into(), event: ev("a") },
        DesignatedPair { path: "Q".into(), event: ev("b") },
    ];
    let v = check_theorem(&ms, Theorem::T14i, 1, 0).unwrap();
    assert_eq!((v.checked, v.violations.len()), (1, 0));
}
