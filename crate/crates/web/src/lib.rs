//! WebAssembly bindings: homology tables, the Jones polynomial and the
//! square-by-square sign data of a cube, each returned as JSON text.

use wasm_bindgen::prelude::*;

pub mod api {
    use covkh::corpus;
    use covkh::glcube::{algebrize_gl2, build_kom_gl2_formal, compare_with_retry, psi_gl2};
    use covkh::homology::{jones_oracle, link_homology};
    use covkh::linkdiag::ArcOrientation;
    use covkh::slcube::{build_kom_sl2, is_ladybug, TreeChoice, Variant};
    use covkh::{parse_pd, PdCode, Specialization};
    use serde_json::{json, Value};

    /// Largest diagram accepted by the page.
    pub const MAX_CROSSINGS: usize = 10;
    /// Largest diagram whose squares are listed one by one.
    pub const MAX_CUBE_CROSSINGS: usize = 6;

    /// Parses inline PD text or a bundled diagram name.
    pub fn load(text: &str, limit: usize) -> Result<PdCode, String> {
        let t = text.trim();
        let source = corpus::CORPUS.iter().find(|(n, _)| *n == t).map_or(t, |(_, code)| *code);
        let pd = parse_pd(source).map_err(|e| e.to_string())?;
        if pd.n_crossings() > limit {
            return Err(format!("{} crossings; this page accepts at most {limit}", pd.n_crossings()));
        }
        if !pd.is_planar() {
            return Err("the PD code does not describe a planar diagram".into());
        }
        Ok(pd)
    }

    fn input_json(pd: &PdCode) -> Value {
        json!({
            "pd": pd.to_text(),
            "crossings": pd.n_crossings(),
            "components": pd.n_components(),
            "writhe": pd.writhe(),
        })
    }

    /// Bundled diagrams as `[{name, pd}]`.
    pub fn corpus_json() -> String {
        let items: Vec<Value> = corpus::CORPUS.iter().map(|(n, t)| json!({ "name": n, "pd": t })).collect();
        Value::Array(items).to_string()
    }

    /// Homology for `variant` in `even | odd | both` through `pipeline` in
    /// `sl2 | gl2`, with a text table per variant.
    pub fn homology_json(text: &str, variant: &str, pipeline: &str) -> Result<String, String> {
        let pd = load(text, MAX_CROSSINGS)?;
        let specs = match variant {
            "even" => vec![Specialization::EVEN],
            "odd" => vec![Specialization::ODD],
            "both" => vec![Specialization::EVEN, Specialization::ODD],
            other => return Err(format!("unknown variant {other:?}")),
        };
        let o = ArcOrientation(0);
        let complex = match pipeline {
            "sl2" => build_kom_sl2(&pd, o, Variant::X, TreeChoice::Min)
                .and_then(|c| c.complex())
                .map_err(|e| e.to_string())?,
            "gl2" => algebrize_gl2(&pd, o).and_then(|c| c.complex()).map_err(|e| e.to_string())?,
            other => return Err(format!("unknown pipeline {other:?}")),
        };
        let mut results = Vec::new();
        for s in specs {
            let h = link_homology(&complex, s, pd.writhe()).map_err(|e| e.to_string())?;
            let mut r = h.to_json(&s.name());
            r["table"] = json!(h.table());
            results.push(r);
        }
        Ok(json!({ "input": input_json(&pd), "pipeline": pipeline, "results": results }).to_string())
    }

    /// Jones polynomial from the state sum next to both Euler characteristics.
    pub fn jones_json(text: &str) -> Result<String, String> {
        let pd = load(text, MAX_CROSSINGS)?;
        let jones = jones_oracle(&pd);
        let c = build_kom_sl2(&pd, ArcOrientation(0), Variant::X, TreeChoice::Min)
            .and_then(|c| c.complex())
            .map_err(|e| e.to_string())?;
        let mut euler = serde_json::Map::new();
        let mut agree = true;
        for s in [Specialization::EVEN, Specialization::ODD] {
            let chi = link_homology(&c, s, pd.writhe()).map_err(|e| e.to_string())?.euler();
            agree &= chi == jones;
            euler.insert(s.name(), json!(chi.to_string()));
        }
        Ok(json!({ "input": input_json(&pd), "jones": jones.to_string(), "euler": euler, "agree": agree }).to_string())
    }

    /// Formal gl2 cube, every square's ψ values, and the comparison
    /// isomorphism with the sl2 cube.
    pub fn cube_json(text: &str) -> Result<String, String> {
        let pd = load(text, MAX_CUBE_CROSSINGS)?;
        let o = ArcOrientation(0);
        let formal = build_kom_gl2_formal(&pd);
        let gl = algebrize_gl2(&pd, o).map_err(|e| e.to_string())?;
        let (cmp, sl) = compare_with_retry(&gl, TreeChoice::Min).map_err(|e| e.to_string())?;
        let sh = &gl.data.shape;
        let squares: Vec<Value> = sh
            .squares()
            .map(|(r, k, l)| {
                json!({
                    "r": sh.coords(r),
                    "k": k,
                    "l": l,
                    "psi_sl2": sl.psi.get(r, k, l).to_string(),
                    "psi_gl2": psi_gl2(gl.data.psi_degree(k), gl.data.psi_degree(l)).to_string(),
                    "ladybug": is_ladybug(&pd, r, k, l),
                })
            })
            .collect();
        Ok(json!({
            "input": input_json(&pd),
            "formal": formal.to_json(),
            "squares": squares,
            "comparison": cmp.to_json(sh),
        })
        .to_string())
    }
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Bundled diagrams as a JSON array.
#[wasm_bindgen]
pub fn corpus() -> String {
    api::corpus_json()
}

/// Homology JSON; `variant` is `even`, `odd` or `both`, `pipeline` is `sl2` or `gl2`.
#[wasm_bindgen]
pub fn homology(pd: &str, variant: &str, pipeline: &str) -> Result<String, JsError> {
    js(api::homology_json(pd, variant, pipeline))
}

/// Jones polynomial and Euler characteristics as JSON.
#[wasm_bindgen]
pub fn jones(pd: &str) -> Result<String, JsError> {
    js(api::jones_json(pd))
}

/// Formal cube, square signs and comparison isomorphism as JSON.
#[wasm_bindgen]
pub fn cube(pd: &str) -> Result<String, JsError> {
    js(api::cube_json(pd))
}

#[cfg(test)]
mod tests {
    use super::api::*;

    #[test]
    fn names_and_inline_text_load_the_same_diagram() {
        let a = load("trefoil", MAX_CROSSINGS).unwrap();
        let b = load("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)", MAX_CROSSINGS).unwrap();
        assert_eq!(a, b);
        assert!(load("7_1", 6).is_err());
        assert!(load("X(1,2,3,4)", MAX_CROSSINGS).is_err());
    }

    #[test]
    fn corpus_lists_every_entry() {
        let v: serde_json::Value = serde_json::from_str(&corpus_json()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), covkh::corpus::CORPUS.len());
    }
}
