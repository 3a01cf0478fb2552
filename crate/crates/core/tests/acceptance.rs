//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `--nocapture`). The long finite-field scans over
//! F_17 and F_23 with all eight representatives are `#[ignore]`d by
//! default; run them with `cargo test --release -- --ignored`.

use eckardt::cliques::{
    blowdown_obstruction, classify, enumerate_cliques, find_representative, fixed_pair,
    generate_databases, maximality_facts, orbit_decomposition_13, suborbit_table_with_workers,
    type_index, PairGraph, TableRow,
};
use eckardt::field::{Domain, Field, PrimeField, Rationals};
use eckardt::picard::{ClassList, ExceptionalClass, CANONICAL};
use eckardt::plane::SetupTag;
use eckardt::reference;
use eckardt::search::{
    clique8_representative, eckardt_search, family_cubics, family_point_scan, family_slice,
    general_position_exists, instantiate_setup, verify_config,
};
use eckardt::symbolic::{
    constraint_polynomial, general_position_polynomials, parse_poly, solve_linear,
    strip_degenerate_factors, substitute_linear,
};
use eckardt::weylgraph::{Clique, WeightedGraph, WEYL_ORDER};

fn pass(criterion: &str, detail: &str) {
    println!("acceptance {criterion}: PASS — {detail}");
}

/// Criterion 1: the lattice suite. Class generation by taxonomy and by
/// bounded integer solution search agree (asserted at construction);
/// pairing distribution (1,56,126,56) everywhere; the partner-weight
/// compatibility law as a full scan; partner is a fixed-point-free
/// involution with pairing 3.
#[test]
fn criterion_1_lattice() {
    let all = ClassList::get(); // construction asserts the two generation routes agree
    assert_eq!(all.len(), 240);
    let mut by_degree = [0usize; 7];
    for c in all.iter() {
        assert_eq!(c.vec().pairing(c.vec()), -1);
        assert_eq!(c.vec().pairing(&CANONICAL), -1);
        by_degree[c.degree() as usize] += 1;
    }
    assert_eq!(by_degree, [8, 28, 56, 56, 56, 28, 8]);

    let g = WeightedGraph::get();
    for i in 0..240u16 {
        let c = all.class(i as u8);
        let (n3, n2, n1, n0) = c.pairing_distribution(all);
        assert_eq!((n3, n2, n1, n0), (1, 56, 126, 56));
        // partner: fixed-point-free involution with pairing 3
        let p = g.partner_of(i as u8);
        assert_ne!(p, i as u8);
        assert_eq!(g.partner_of(p), i as u8);
        assert_eq!(g.weight(i as u8, p), 3);
    }
    // partner-weight compatibility, full scan: for every pair e1·e2 = 3 and every f,
    // e1·f = 1 ⇔ e2·f = 1 and e1·f = 0 ⇔ e2·f = 2
    for e1 in 0..240u16 {
        let e1 = e1 as u8;
        let e2 = g.partner_of(e1);
        for f in 0..240u16 {
            let f = f as u8;
            if f == e1 || f == e2 {
                continue;
            }
            let (w1, w2) = (g.weight(e1, f), g.weight(e2, f));
            assert_eq!(w1 == 1, w2 == 1, "classes {e1} {e2} {f}");
            assert_eq!(w1 == 0, w2 == 2, "classes {e1} {e2} {f}");
        }
    }
    pass(
        "criterion 1",
        "240 classes by two methods, distribution (1,56,126,56), partner compatibility full scan, fixed-point-free involution",
    );
}

/// Criterion 2: clique combinatorics. Maximum weight-{1,2} size 12, every
/// size-11 extends, all size-12 through the fixed pair are four disjoint
/// triangles, weight-2-only maximum 3, weight-{1,3} maximum 16 with the
/// partner-pair structure and no maximal {1,3} cliques of sizes 10–15.
#[test]
fn criterion_2_clique_combinatorics() {
    let g = WeightedGraph::get();
    let report = maximality_facts(g);
    assert_eq!(report.max_12, 12);
    assert!(report.every_11_extends);
    assert!(report.twelve_all_four_triangles);
    assert_eq!(report.max_weight2_only, 3);
    assert_eq!(report.max_13, 16);
    assert!(report.no_maximal_13_between_10_and_15);

    // every 16-clique is eight partner pairs with all cross weights 1
    let h = PairGraph::build(g);
    assert_eq!(h.clique_counts[8], 2025);
    assert_eq!(h.max_clique, 8);
    let mut sixteens = 0u64;
    h.cliques_of_size(8, |pairs| {
        sixteens += 1;
        let mut verts: Vec<u8> = Vec::with_capacity(16);
        for &pid in pairs {
            let (c, d) = h.pairs[pid as usize];
            assert_eq!(g.weight(c, d), 3);
            verts.push(c);
            verts.push(d);
        }
        for i in 0..16 {
            for j in i + 1..16 {
                let w = g.weight(verts[i], verts[j]);
                assert!(w == 1 || w == 3, "weights inside a 16-clique");
            }
        }
    });
    assert_eq!(sixteens, 2025);

    // spot check: direct enumeration of {1,3} 16-cliques through the fixed
    // pair agrees with the partner-pair prediction
    let (a, b) = fixed_pair(g);
    let direct = enumerate_cliques(g, &[1, 3], 16, &[a, b]);
    let pa = h.pair_of[a as usize];
    let pb = h.pair_of[b as usize];
    let mut predicted = 0;
    h.cliques_of_size(8, |pairs| {
        if pairs.contains(&pa) && pairs.contains(&pb) {
            predicted += 1;
        }
    });
    assert_eq!(direct.len(), predicted);
    for k in &direct {
        let counts = k.weight_counts(g);
        assert_eq!(counts[3], 8, "eight partner pairs");
        assert_eq!(counts[1], 112, "the rest weight 1");
    }
    pass(
        "criterion 2",
        "max {1,2} clique 12, 11-cliques extend, 12-cliques are four triangles, weight-2 max 3, {1,3} max 16 with partner structure",
    );
}

fn check_table(rows: &[TableRow]) {
    assert_eq!(rows.len(), 8);
    let mut sum = 0;
    let mut suborbit_total = 0;
    for (t, stab, orbit, sub) in reference::TABLE1 {
        let r = rows
            .iter()
            .find(|r| r.clique_type == t)
            .unwrap_or_else(|| panic!("type {t} missing"));
        assert_eq!(r.suborbit, sub, "sub-orbit of type {t}");
        assert_eq!(r.orbit, orbit, "orbit of type {t}");
        assert_eq!(r.stabilizer, stab, "stabilizer of type {t}");
        assert_eq!(
            r.orbit * r.w1_edges,
            15_120 * r.suborbit,
            "double counting for type {t}"
        );
        assert_eq!(r.orbit * r.stabilizer, WEYL_ORDER);
        sum += r.orbit;
        suborbit_total += r.suborbit;
    }
    assert_eq!(sum, reference::SUM_ORBITS);
    assert_eq!(suborbit_total, 257_208);
}

/// Criterion 3: Table-1 reproduction. 257,208 cliques through the fixed
/// pair in exactly 8 types with the recorded counts; derived orbit and
/// stabilizer sizes match; the double-counting identity holds for every
/// row; the type-8 orbit is independently confirmed by BFS closure.
#[test]
fn criterion_3_table1() {
    let g = WeightedGraph::get();
    let rows = suborbit_table_with_workers(g, 2);
    check_table(&rows);
    // independent confirmation of one row by full orbit closure
    let rep8 = Clique::from_classes(g, &clique8_representative());
    let orbit = g.orbit_of_clique(&rep8, 1 << 22).unwrap();
    assert_eq!(orbit, 2_150_400);
    pass(
        "criterion 3",
        "257208 sub-orbit cliques in 8 types, orbits and stabilizers as recorded, double counting exact, type-8 orbit BFS-confirmed",
    );
}

/// Criterion 4: the weight-{1,3} orbit decomposition. Four isomorphism
/// types by partner-pair count, exactly six Weyl orbits, the 3- and 4-pair
/// types splitting in two.
#[test]
fn criterion_4_orbit_decomposition_13() {
    let g = WeightedGraph::get();
    let d = orbit_decomposition_13(g, 1 << 26).expect("within the element budget");
    assert_eq!(
        d.totals.iter().map(|(k, _)| *k).collect::<Vec<_>>(),
        vec![2, 3, 4, 5]
    );
    assert_eq!(d.orbits.len(), 6);
    for (k, sizes) in reference::ORBITS13 {
        let got: Vec<u64> = d
            .orbits
            .iter()
            .filter(|o| o.pair_count == k)
            .map(|o| o.size)
            .collect();
        assert_eq!(got, sizes, "orbits with {k} partner pairs");
        let total = d.totals.iter().find(|(kk, _)| *kk == k).unwrap().1;
        assert_eq!(total, sizes.iter().sum::<u64>());
    }
    pass(
        "criterion 4",
        "4 isomorphism types, 6 orbits, 3- and 4-pair types split in two",
    );
}

/// Criterion 5: the blow-down obstruction. The explicit 10-vector set has
/// type 4 and admits no class disjoint from any 4-subset; same for the
/// shipped type-5 and type-8 representatives.
#[test]
fn criterion_5_blowdown() {
    let g = WeightedGraph::get();
    let s_classes: Vec<ExceptionalClass> = [
        "1 0 0 0 0 0 0 1 1",
        "1 0 0 1 1 0 0 0 0",
        "1 1 1 0 0 0 0 0 0",
        "1 0 0 0 0 1 1 0 0",
        "4 2 1 2 1 2 1 1 1",
        "4 1 2 2 1 1 1 1 2",
        "4 1 1 2 1 1 2 2 1",
        "4 1 2 1 2 1 2 1 1",
        "4 2 1 1 2 1 1 2 1",
        "4 2 1 1 1 1 2 1 2",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let s_clique = Clique::from_classes(g, &s_classes);
    assert_eq!(
        type_index(&classify(g, &s_clique).unwrap()),
        Some(4),
        "the explicit set is type 4"
    );
    assert!(blowdown_obstruction(g, &s_clique).is_none());

    let rep8 = Clique::from_classes(g, &clique8_representative());
    assert_eq!(type_index(&classify(g, &rep8).unwrap()), Some(8));
    assert!(blowdown_obstruction(g, &rep8).is_none());

    let dbs = generate_databases(g, 2);
    let lines = eckardt::search::builtin_lines(SetupTag::A);
    let db5 = &dbs.iter().find(|(t, _)| *t == 5).unwrap().1;
    let rep5 = find_representative(g, db5, &lines, |_| false).expect("type-5 four-line rep");
    assert!(blowdown_obstruction(g, rep5).is_none());
    pass(
        "criterion 5",
        "type 4 set and type-5/type-8 representatives admit no class disjoint from a 4-subset",
    );
}

/// Criterion 6: the symbolic suite. The conic constraint factors as
/// (d−1)(e−d−1); the c₇,₈ constraint matches F1 up to scalar and
/// degeneracy factors; the (f−d)p + q identity expands exactly; the
/// a = −q/p substitution reproduces F2; the symbolic and concrete paths
/// agree on 100 large-prime assignments.
#[test]
fn criterion_6_symbolic() {
    // conic
    let res = constraint_polynomial(SetupTag::A, &reference::conic_b248(), true).unwrap();
    let expect = parse_poly("d - 1")
        .unwrap()
        .mul(&parse_poly("e - d - 1").unwrap());
    assert!(res.residual.eq_up_to_scalar(&expect));
    assert!(res.factorization_holds());

    // F1
    let c78: ExceptionalClass = "3 1 1 1 1 1 1 0 2".parse().unwrap();
    let res1 = constraint_polynomial(SetupTag::A, &c78, true).unwrap();
    assert!(res1.factorization_holds());
    let f1_ref = reference::f1_reference();
    assert!(reference::eq_up_to_scalar_and_s(
        SetupTag::A,
        &res1.residual,
        &f1_ref
    ));

    // the identity, by exact expansion
    let p = parse_poly(reference::F1_P_TEXT).unwrap();
    let q = parse_poly("f - d")
        .unwrap()
        .mul(&parse_poly(reference::F1_Q_FACTOR_TEXT).unwrap());
    let lhs = parse_poly("f - d").unwrap().mul(&p).add(&q);
    let rhs = parse_poly("d")
        .unwrap()
        .mul(&parse_poly("d - f").unwrap())
        .mul(&parse_poly("c + d - f - 1").unwrap())
        .mul(&parse_poly("b*d - f + 1").unwrap());
    assert!(lhs == rhs || lhs == rhs.neg());

    // F2 via the substitution a = −q/p into the c₈,₇ constraint
    let s_set = general_position_polynomials(SetupTag::A);
    let f1 = strip_degenerate_factors(&res1.residual, s_set).residual;
    let (num, den) = solve_linear(&f1, 0).unwrap();
    let c87: ExceptionalClass = "3 1 1 1 1 1 1 2 0".parse().unwrap();
    let res2 = constraint_polynomial(SetupTag::A, &c87, true).unwrap();
    let core2 = strip_degenerate_factors(&res2.residual, s_set).residual;
    let sub = substitute_linear(&core2, 0, &num, &den);
    let f2 = strip_degenerate_factors(&sub.result, s_set).residual;
    assert!(reference::eq_up_to_scalar_and_s(
        SetupTag::A,
        &f2,
        &reference::f2_reference()
    ));

    // the degeneracy set S contains the factors named by the identity
    for member in ["d", "f - d", "c + d - f - 1", "b*d - f + 1", "f - e"] {
        let target = parse_poly(member).unwrap();
        assert!(
            s_set.iter().any(|s| s.eq_up_to_scalar(&target)),
            "S contains {member}"
        );
    }
    // the stripped factor lists of the instances used are pairwise coprime
    for stripped in [&res.stripped, &res1.stripped, &res2.stripped] {
        for (i, (a, _)) in stripped.iter().enumerate() {
            for (b, _) in &stripped[i + 1..] {
                assert!(
                    a.exact_div(b).is_none() && b.exact_div(a).is_none(),
                    "stripped factors must be coprime"
                );
            }
        }
    }

    // stripping endpoints are stable under randomized member orders for
    // the instances used
    let mut rng = eckardt::field::XorShift(0x0bad_cafe);
    for instance in [&res1.residual, &sub.result] {
        let canonical = strip_degenerate_factors(instance, s_set).residual;
        for _ in 0..3 {
            let mut shuffled = s_set.clone();
            for i in (1..shuffled.len()).rev() {
                let j = rng.below(i as u64 + 1) as usize;
                shuffled.swap(i, j);
            }
            let res = strip_degenerate_factors(instance, &shuffled).residual;
            assert!(res.eq_up_to_scalar(&canonical), "stripping order stability");
        }
    }

    // symbolic ⇔ concrete oracle on 100 large-prime assignments
    let agreement = reference::constraint_oracle_agreement(100, 0x5eed_0001);
    assert_eq!(agreement, 100);
    pass(
        "criterion 6",
        "conic (d-1)(e-d-1), F1 and F2 reproduced, identity exact, 100/100 oracle agreement",
    );
}

/// Criterion 7: the family suite. F2 vanishes at Q; the configuration at Q
/// is in general position over Q; exactly ten curves pass through P; the
/// clique carries a partner pair and the two cubic classes pair to 3. The
/// height-100 scan reports its point count as an advisory check.
#[test]
fn criterion_7_family() {
    let fam = family_slice().unwrap();
    assert!(reference::f2_vanishes_at_q(&fam.f2));
    let f = Rationals;
    let vals = vec![
        f.zero(),
        f.zero(),
        f.zero(),
        f.zero(),
        f.parse_elem("1/2").unwrap(),
        f.parse_elem("-1/2").unwrap(),
        f.zero(),
        f.zero(),
    ];
    assert!(f.is_zero(&fam.slice.evaluate(&vals)));
    assert_eq!(fam.outcome.gp, Ok(()));
    assert_eq!(fam.outcome.concurrent, 10);
    assert!(fam.outcome.ramification_pair.is_some());
    let (c78, c87) = family_cubics();
    assert_eq!(c78.pairing(&c87), 3);
    assert_eq!(fam.outcome.partners_concurrent, Some(true));

    let points = family_point_scan(&fam, 100);
    assert!(points.iter().all(|pt| pt.avoids_v2));
    println!(
        "acceptance criterion 7 [advisory]: {} rational points up to height 100 (6 recorded), all avoiding the degeneracy locus",
        points.len()
    );
    pass(
        "criterion 7",
        "F2(Q) = 0, general position over Q, 10 concurrent curves, partner pairs present, cubics pair to 3",
    );
}

/// Criterion 8 (core): no eight points in general position over F_p for
/// p ≤ 13; the F_19 scan finds the recorded tuple and the recorded
/// points verify with ten concurrent curves.
#[test]
fn criterion_8_finite_fields() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let r = general_position_exists(p, 2);
        assert!(!r.exists, "p = {p}");
    }
    let rep = clique8_representative();
    let report = eckardt_search(19, SetupTag::A, &rep, 2, None).unwrap();
    assert!(!report.partial);
    assert!(report
        .realizations
        .iter()
        .any(|r| r.as_slice() == reference::F19_TUPLE));
    let f = PrimeField::new(19);
    let config = instantiate_setup(f, SetupTag::A, &reference::F19_TUPLE);
    let outcome = verify_config(&config, &rep).unwrap();
    assert_eq!(outcome.gp, Ok(()));
    assert_eq!(outcome.concurrent, 10);
    pass(
        "criterion 8",
        "p ≤ 13 have no general-position octets; F19 scan finds (2,4,16,7,18,16); recorded points verify 10/10",
    );
}

/// Criterion 8, the p = 17 existence clause. The suite encodes the
/// expectation of a witness over F_17; the exhaustive scan shows none
/// exists (every configuration surviving the collinearity and conic
/// conditions fails the singular-cubic condition), so this test is
/// expected to fail. See the README for the analysis.
#[test]
fn criterion_8_p17_witness_expected() {
    let r = general_position_exists(17, 2);
    println!(
        "acceptance criterion 8 (p=17): exhaustive scan reports exists = {} — this suite encodes the expectation `true`",
        r.exists
    );
    assert!(
        r.exists,
        "no eight points in general position exist in P²(F_17); the exhaustive scan, \
         random sampling, and an independent exact checker all agree (see README)"
    );
}

/// Criterion 9: determinism. Reruns of the Table-1 pipeline, the orbit
/// decomposition, and the F_19 scan with different worker counts produce
/// identical reports modulo timing.
#[test]
fn criterion_9_determinism() {
    let g = WeightedGraph::get();
    let rows1 = suborbit_table_with_workers(g, 1);
    let rows3 = suborbit_table_with_workers(g, 3);
    assert_eq!(rows1, rows3);

    let d1 = orbit_decomposition_13(g, 1 << 26).unwrap();
    let d2 = orbit_decomposition_13(g, 1 << 26).unwrap();
    assert_eq!(d1, d2);

    let rep = clique8_representative();
    let r1 = eckardt_search(19, SetupTag::A, &rep, 1, None).unwrap();
    let r2 = eckardt_search(19, SetupTag::A, &rep, 2, None).unwrap();
    assert_eq!(r1.fingerprint(), r2.fingerprint());
    let strip_wall = |report: &eckardt::search::SearchReport| {
        report
            .render()
            .lines()
            .filter(|l| !l.trim_start().starts_with("wall-ms:"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip_wall(&r1), strip_wall(&r2));

    let w1 = general_position_exists(19, 1);
    let w2 = general_position_exists(19, 2);
    assert_eq!(w1.witness, w2.witness);
    pass(
        "criterion 9",
        "table, orbit decomposition, F19 scan and witness byte-identical across worker counts",
    );
}

/// Supporting facts used by the searches: four-line representatives exist
/// for all eight types, the recorded example representative is in the
/// type-1 database, and a two-line representative with no other lines
/// exists.
#[test]
fn representatives_exist() {
    let g = WeightedGraph::get();
    let dbs = generate_databases(g, 2);
    let lines = eckardt::search::builtin_lines(SetupTag::A);
    for (t, db) in &dbs {
        db.validate(g).expect("database validates");
        let rep = find_representative(g, db, &lines, |_| false);
        assert!(rep.is_some(), "four-line representative for type {t}");
    }
    // a recorded type-1 representative containing the four lines
    let rep1_a = Clique::from_classes(
        g,
        &[
            ExceptionalClass::line(0, 1),
            ExceptionalClass::line(2, 3),
            ExceptionalClass::line(4, 5),
            ExceptionalClass::line(6, 7),
            ExceptionalClass::cubic(1, 0),
            ExceptionalClass::quartic(1, 2, 4),
            ExceptionalClass::quartic(1, 3, 6),
            ExceptionalClass::quartic(1, 5, 7),
            ExceptionalClass::quartic(2, 5, 6),
            ExceptionalClass::quartic(3, 4, 7),
        ],
    );
    let db1 = &dbs.iter().find(|(t, _)| *t == 1).unwrap().1;
    assert!(db1.cliques.contains(&rep1_a));
    assert_eq!(type_index(&classify(g, &rep1_a).unwrap()), Some(1));
    // a type-1 representative with exactly the two fixed lines
    let two_lines = [ExceptionalClass::line(0, 1), ExceptionalClass::line(2, 3)];
    let rep =
        find_representative(g, db1, &two_lines, |c| c.is_line()).expect("two-line representative");
    assert_eq!(
        rep.classes(g).iter().filter(|c| c.is_line()).count(),
        2,
        "no other lines"
    );
    pass(
        "representatives",
        "four-line reps for all types, recorded type-1 representative present, two-line rep exists",
    );
}

/// Extended target (off by default): zero realizations over F_17 for all
/// eight pinned representatives.
#[test]
#[ignore = "multi-minute scan; run with --ignored"]
fn extended_f17_all_representatives() {
    let g = WeightedGraph::get();
    let reps = eckardt::search::default_representatives(g, 2);
    let mut gp_counts = Vec::new();
    for (t, rep) in &reps {
        let report = eckardt_search(17, SetupTag::A, rep, 2, None).unwrap();
        assert!(
            report.realizations.is_empty(),
            "type {t} must have no realizations over F_17"
        );
        gp_counts.push(report.gp_passing);
    }
    assert!(
        gp_counts.windows(2).all(|w| w[0] == w[1]),
        "general-position count is representative-independent"
    );
    pass(
        "extended F17",
        "zero realizations for all 8 representatives",
    );
}

/// Extended target (off by default): zero realizations over F_23 for all
/// eight pinned representatives.
#[test]
#[ignore = "multi-hour budget; run with --ignored"]
fn extended_f23_all_representatives() {
    let g = WeightedGraph::get();
    let reps = eckardt::search::default_representatives(g, 2);
    for (t, rep) in &reps {
        let report = eckardt_search(23, SetupTag::A, rep, 2, None).unwrap();
        assert!(
            report.realizations.is_empty(),
            "type {t} must have no realizations over F_23"
        );
    }
    pass(
        "extended F23",
        "zero realizations for all 8 representatives",
    );
}
