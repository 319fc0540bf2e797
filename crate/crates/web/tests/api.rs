use covkh_web::api::{cube_json, homology_json, jones_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn unknot_homology() {
    let v = parse(homology_json("UNKNOT 1", "both", "sl2").unwrap());
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        let h = r["homology"].as_array().unwrap();
        assert_eq!(h.len(), 2);
        assert!(h.iter().all(|g| g["t"] == 0 && g["free"] == 1));
        assert!(r["table"].as_str().unwrap().contains('Z'));
    }
}

#[test]
fn gl2_matches_sl2() {
    for variant in ["even", "odd"] {
        let a = parse(homology_json("figure-eight", variant, "sl2").unwrap());
        let b = parse(homology_json("figure-eight", variant, "gl2").unwrap());
        assert_eq!(a["results"], b["results"]);
    }
}

#[test]
fn jones_agrees() {
    let v = parse(jones_json("trefoil").unwrap());
    assert_eq!(v["agree"], true);
    assert_eq!(v["jones"], "-q^-9 + q^-5 + q^-3 + q^-1");
}

#[test]
fn negative_hopf_cube() {
    let v = parse(cube_json("X(1,4,2,3) X(3,2,4,1)").unwrap());
    assert_eq!(v["input"]["writhe"], -2);
    let edges = v["formal"]["edges"].as_array().unwrap();
    let scalars: Vec<&str> = edges.iter().map(|e| e["scalar"].as_str().unwrap()).collect();
    assert!(scalars.contains(&"-Y"));
    assert_eq!(v["squares"].as_array().unwrap().len(), 1);
    assert_eq!(v["comparison"]["variant"], "X");
}

#[test]
fn errors_are_messages() {
    assert!(homology_json("X(1,2", "even", "sl2").is_err());
    assert!(homology_json("hopf", "mixed", "sl2").is_err());
    assert!(homology_json("hopf", "even", "sl3").is_err());
    assert!(cube_json("7_1").is_err());
}
