use qlab::congruence::{check_ag_conjecture, ClaimSet, Lab, Progression, Target};
use qlab::qproducts::dsome_gf_lambert;
use qlab::report::Status;
use qlab::ring::Ring;

#[test]
fn builtin_claims_match_expectations() {
    let lab = Lab::new();
    let set = ClaimSet::builtin();
    let reports = set.check_all(&lab, None, true);
    for r in &reports {
        println!("{} {:?}", r.id, r.status);
    }
    assert!(reports.iter().all(|r| r.as_expected()));
    let printed: Vec<_> = reports.iter().filter(|r| r.id.ends_with("-variant")).collect();
    assert_eq!(printed.len(), 4);
    assert!(printed.iter().all(|r| r.fail_index() == Some(0)));
}

#[test]
fn modular_pipeline_matches_exact() {
    let exact = dsome_gf_lambert(2001, Ring::ExactRational).unwrap();
    for m in [2u64, 4, 5, 8, 16, 25] {
        let s = qlab::congruence::series_for_target(&Target::Dsome, 2000, m).unwrap();
        assert_eq!(exact.reduce_mod(m).unwrap().residues().unwrap(), s.residues().unwrap());
    }
}

#[test]
fn scan_at_conjecture_steps() {
    let lab = Lab::new();
    for (step, m, n_max) in [(250usize, 8u64, 100usize), (500, 16, 50)] {
        let hits = lab.scan(&Target::Dsome, (step, step), &[m], n_max, 20).unwrap();
        let bs: Vec<usize> = hits.iter().map(|h| h.prog.residue).collect();
        println!("step {step} mod {m}: {bs:?}");
        for b in (0..5).map(|k| step / 5 * k + if step == 250 { 21 } else { 71 }) {
            assert!(bs.contains(&b), "{b}");
        }
        assert!(hits.iter().all(|h| h.witness_free));
    }
    let hits = lab.scan(&Target::Dsome, (4, 4), &[4], 100, 20).unwrap();
    assert!(hits.iter().any(|h| h.prog == Progression::new(4, 0).unwrap()));
}

#[test]
fn ag_conjecture() {
    let lab = Lab::new();
    for (alpha, lmax) in [(1, 500), (2, 5000), (3, 5000)] {
        let r = check_ag_conjecture(&lab, alpha, lmax).unwrap();
        println!("{} {:?}", r.id, r.status);
        assert_ne!(
            std::mem::discriminant(&r.status),
            std::mem::discriminant(&Status::Error { kind: String::new(), message: String::new() })
        );
    }
}

#[test]
fn scan_hits_hold_in_exact_arithmetic() {
    let lab = Lab::new();
    let exact = dsome_gf_lambert(500 * 21, Ring::ExactRational).unwrap();
    for (step, m) in [(250usize, 8u64), (500, 16)] {
        let reduced = exact.reduce_mod(m).unwrap();
        let residues = reduced.residues().unwrap();
        let hits = lab.scan(&Target::Dsome, (step, step), &[m], 20, 20).unwrap();
        assert!(hits.len() > 5);
        for h in &hits {
            for n in 0..=20 {
                let i = step * n + h.prog.residue;
                if i < residues.len() {
                    assert_eq!(residues[i], 0, "DSOME({i}) mod {m}");
                }
            }
        }
    }
}
