//! Reports produced through the library entry point on the sample inputs.

use serde_json::Value;
use torictool::{run, Command, Flags};

fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn report(command: Command, file: &str, flags: &Flags) -> Value {
    let text = run(command, &data(file), flags).unwrap_or_else(|e| panic!("{file}: {e}"));
    serde_json::from_str(&text).unwrap()
}

fn indices(v: &Value) -> Vec<Vec<u64>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|q| q.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
        .collect()
}

#[test]
fn analyze_reports_torsion_two() {
    let r = report(Command::Analyze, "torsion_two.phase", &Flags::default());
    assert_eq!(r["torsion"]["tau"], 2);
    assert_eq!(r["toric_degree"], 2);
    assert_eq!(r["tuple"]["reduced"], true);
    assert_eq!(r["tuple"]["m"], r["torsion"]["m"]);
    assert_eq!(r["verdict"]["criterion"], "sufficient");
    assert_eq!(r["certified"], false);
}

#[test]
fn analyze_reports_the_verdict_fields() {
    let r = report(Command::Analyze, "impure_four.phase", &Flags::default());
    assert_eq!(r["classification"], "impure_torsion");
    let v = &r["verdict"];
    assert_eq!(v["criterion"], "iff");
    assert_eq!(v["torus_dimension"], 2);
    assert_eq!(v["compatibility_required"], false);
    let w = v["weight_matrix"].as_array().unwrap();
    assert_eq!(w.len(), 4);
    assert!(w.iter().all(|row| row.as_array().unwrap().len() == 2));
    let nondiag = Flags {
        non_diagonalizable: true,
        ..Flags::default()
    };
    let r = report(Command::Analyze, "impure_four.phase", &nondiag);
    assert_eq!(r["verdict"]["compatibility_required"], true);
}

#[test]
fn resonances_of_the_second_coordinate() {
    let flags = Flags {
        coordinate: Some(2),
        max_degree: Some(6),
        ..Flags::default()
    };
    let r = report(Command::Resonances, "two_vectors.phase", &flags);
    assert_eq!(r["coordinate"], 2);
    assert_eq!(r["max_degree"], 6);
    assert_eq!(indices(&r["resonant_multi_indices"]), vec![vec![1, 0, 1]]);
}

#[test]
fn resonances_of_every_coordinate() {
    let flags = Flags {
        max_degree: Some(10),
        ..Flags::default()
    };
    let r = report(Command::Resonances, "two_vectors.phase", &flags);
    let all = r["resonances"].as_array().unwrap();
    assert_eq!(all.len(), 3);
    assert!(all[0]["resonant_multi_indices"].as_array().unwrap().is_empty());
    assert!(all[2]["resonant_multi_indices"].as_array().unwrap().is_empty());
    assert_eq!(all[1]["coordinate"], 2);
}

#[test]
fn resonances_are_listed_in_graded_lex_order() {
    let flags = Flags {
        coordinate: Some(1),
        max_degree: Some(50),
        ..Flags::default()
    };
    let r = report(Command::Resonances, "torsion_seven.phase", &flags);
    assert_eq!(indices(&r["resonant_multi_indices"]), vec![vec![43, 7]]);
    let r = report(Command::Resonances, "simplifiable_four.phase", &flags);
    let qs = indices(&r["resonant_multi_indices"]);
    for w in qs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (da, db): (u64, u64) = (a.iter().sum(), b.iter().sum());
        assert!(da < db || (da == db && a > b), "{a:?} before {b:?}");
    }
}

#[test]
fn classify_reports_impure_torsion() {
    let r = report(Command::Classify, "impure_four.phase", &Flags::default());
    assert_eq!(r["classification"], "impure_torsion");
    assert_eq!(r["impure_coordinates"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(r["simplification"], Value::Null);
}

#[test]
fn classify_reports_an_infeasible_system() {
    let r = report(Command::Classify, "torsion_seven.phase", &Flags::default());
    assert_eq!(r["classification"], "pure_torsion_not_simplified");
    assert_eq!(r["simplification"]["status"], "not_found");
    assert_eq!(r["simplification"]["reason"], "infeasible");
    assert_eq!(r["certified"], false);
}

#[test]
fn simplify_finds_a_simple_tuple() {
    let r = report(Command::Simplify, "simplifiable_four.phase", &Flags::default());
    assert_eq!(r["status"], "simplified");
    let h: Vec<i64> = r["H"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    let xi: Vec<i64> = r["simple_tuple"]["vectors"][0].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    // ξ⁽¹⁾ = η⁽¹⁾ − mH with η⁽¹⁾ = (1,1,1,1) and m = 3.
    let expected: Vec<i64> = h.iter().map(|x| 1 - 3 * x).collect();
    assert_eq!(xi, expected);
    assert_eq!(r["monoid"]["certified"], true);
}

#[test]
fn simplify_reports_not_found_with_its_bound() {
    let flags = Flags {
        max_degree: Some(20),
        ..Flags::default()
    };
    let r = report(Command::Simplify, "torsion_seven.phase", &flags);
    assert_eq!(r["status"], "not_found");
    assert_eq!(r["search_bound"], 20);
}

#[test]
fn cominimal_bound_is_honored() {
    let flags = Flags {
        comin_bound: Some(3),
        ..Flags::default()
    };
    let r = report(Command::Simplify, "torsion_seven.phase", &flags);
    assert_eq!(r["monoid"]["cominimal_bound"], 3);
}

#[test]
fn simplify_rejects_torsion_free_and_impure_input() {
    for file in ["two_vectors.phase", "impure_four.phase"] {
        let e = run(Command::Simplify, &data(file), &Flags::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{file}");
    }
}

#[test]
fn exact_normalization_has_zero_residual() {
    let r = report(Command::Normalize, "exact_resonant.germ", &Flags::default());
    assert_eq!(r["mode"], "exact");
    assert_eq!(r["residual_max"], 0);
    assert_eq!(r["residual_log2"], Value::Null);
    // Only z1² e2 is resonant for λ = (1/2, 1/4).
    let g = r["g"].as_array().unwrap();
    let nonlinear: Vec<&Value> = g.iter().filter(|t| t["multi_index"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum::<u64>() > 1).collect();
    assert_eq!(nonlinear.len(), 1);
    assert_eq!(nonlinear[0]["coordinate"], 2);
    assert_eq!(nonlinear[0]["coefficient"], "3 + -1 I");
}

#[test]
fn phase_normalization_reaches_the_requested_precision() {
    let r = report(Command::Normalize, "phase_resonant.germ", &Flags::default());
    assert_eq!(r["mode"], "phase");
    assert_eq!(r["precision"], 256);
    assert!(r["relative_residual_log2"].as_f64().unwrap() < -236.0);
}

#[test]
fn small_divisor_is_a_precision_failure() {
    let flags = Flags {
        precision: Some(64),
        ..Flags::default()
    };
    let e = run(Command::Normalize, &data("small_divisor.germ"), &flags).unwrap_err();
    assert_eq!(e.exit_code(), 3);
    assert!(e.message.contains("coordinate 1"), "{}", e.message);
    assert!(run(Command::Normalize, &data("small_divisor.germ"), &Flags::default()).is_ok());
}

#[test]
fn flow_check_passes_on_a_normal_form_and_fails_on_a_perturbation() {
    let flags = Flags {
        precision: Some(128),
        ..Flags::default()
    };
    let ok = report(Command::Flow, "normal_field.germ", &flags);
    assert_eq!(ok["normal_form_check"]["passed"], true);
    assert_eq!(ok["normal_form_check"]["witness"], Value::Null);
    let bad = report(Command::Flow, "perturbed_field.germ", &flags);
    assert_eq!(bad["normal_form_check"]["passed"], false);
    assert_eq!(bad["normal_form_check"]["witness"], serde_json::json!({"coordinate": 1, "multi_index": [1, 1]}));
}

#[test]
fn flow_time_is_parsed_as_a_rational() {
    let flags = Flags {
        precision: Some(64),
        time: Some("1/2".into()),
        ..Flags::default()
    };
    let r = report(Command::Flow, "normal_field.germ", &flags);
    assert_eq!(r["time"], "1/2");
    let bad = Flags {
        time: Some("half".into()),
        ..Flags::default()
    };
    assert_eq!(run(Command::Flow, &data("normal_field.germ"), &bad).unwrap_err().exit_code(), 1);
}

#[test]
fn commutation_with_explicit_weights() {
    let flags = Flags {
        weights: Some("1,0;1,1;2,1".into()),
        ..Flags::default()
    };
    let r = report(Command::CheckCommute, "torus_weights.germ", &flags);
    assert_eq!(r["commutes"], false);
    assert_eq!(r["witnesses"], serde_json::json!([{"coordinate": 2, "multi_index": [2, 0, 0]}]));
    let wrong_rows = Flags {
        weights: Some("1,0;1,1".into()),
        ..Flags::default()
    };
    assert_eq!(run(Command::CheckCommute, &data("torus_weights.germ"), &wrong_rows).unwrap_err().exit_code(), 2);
}

#[test]
fn commutation_with_weights_from_the_phases() {
    let r = report(Command::CheckCommute, "phase_resonant.germ", &Flags::default());
    assert_eq!(r["weights_source"], "verdict");
    assert_eq!(r["weight_matrix"], serde_json::json!([[1], [2]]));
    // z1 z2 e1 and z1 z2² e2 are off the torus weights; z1² e2 is on them.
    assert_eq!(
        r["witnesses"],
        serde_json::json!([{"coordinate": 1, "multi_index": [1, 1]}, {"coordinate": 2, "multi_index": [1, 2]}])
    );
    let e = run(Command::CheckCommute, &data("torus_weights.germ"), &Flags::default()).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let cases = [
        (Command::Analyze, "simplifiable_four.phase"),
        (Command::Resonances, "two_vectors.phase"),
        (Command::Classify, "torsion_two.phase"),
        (Command::Simplify, "simplifiable_four.phase"),
        (Command::Normalize, "phase_resonant.germ"),
        (Command::Flow, "perturbed_field.germ"),
        (Command::CheckCommute, "phase_resonant.germ"),
    ];
    for (command, file) in cases {
        let a = run(command, &data(file), &Flags::default()).unwrap();
        let b = run(command, &data(file), &Flags::default()).unwrap();
        assert_eq!(a, b, "{} {file}", command.name());
    }
}

#[test]
fn germ_commands_reject_phase_files_with_a_position() {
    let e = run(Command::Normalize, &data("torsion_two.phase"), &Flags::default()).unwrap_err();
    assert_eq!(e.exit_code(), 1);
    assert_eq!(e.position, Some((4, 1)));
    assert!(e.message.contains("dim"), "{}", e.message);
}
