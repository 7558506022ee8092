//! One function per subcommand. Each returns the complete stdout text so
//! that output is assembled in a fixed order before anything is printed.

use std::fs;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use twobridge_core::angles::{assign_angles, expand_to_tetrahedra, verify_angle_structure};
use twobridge_core::blocks::decompose_exponents;
use twobridge_core::isosig::encode;
use twobridge_core::moves::simplify as simplify_moves;
use twobridge_core::triangulation::{build_sakuma_weeks, degree_predicates, Triangulation};
use twobridge_core::volume::{
    bounds_report, explicit_volume, maximize_volume, v3, BoundsReport, MaximizeOptions, VolumeError,
};
use twobridge_core::word::{enumerate_words, parse_word, Word};

use crate::output::{self, SCHEMA_VERSION};
use crate::{CliError, Format, MaximizerArgs, WordInput};

/// Collects words from positional arguments and files, in that order.
fn read_words(input: &WordInput) -> Result<Vec<Word>, CliError> {
    let mut texts: Vec<String> = input.words.clone();
    for path in &input.file {
        let body = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        texts.extend(
            body.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from),
        );
    }
    if texts.is_empty() {
        return Err(CliError::Input("no words given".into()));
    }
    texts.iter().map(|t| parse_word(t).map_err(|e| CliError::Input(format!("{t:?}: {e}")))).collect()
}

fn triangulation(w: &Word) -> Result<Triangulation, CliError> {
    let t = build_sakuma_weeks(&w.normalize()).map_err(|e| CliError::Input(format!("{w}: {e}")))?;
    let report = t.validate();
    if !report.passed() {
        return Err(CliError::Verification(format!("{w}: invalid triangulation: {:?}", report.problems)));
    }
    Ok(t)
}

fn family_exponents(w: &Word) -> Result<Vec<u32>, CliError> {
    w.normalize()
        .family_exponents()
        .ok_or_else(|| CliError::Input(format!("{w} is not of the form R L^a1 ... X^an Y with Y != X")))
}

fn volume_error(w: &Word, e: VolumeError) -> CliError {
    match e {
        VolumeError::Angles(_) | VolumeError::Blocks(_) | VolumeError::Triangulation(_) => {
            CliError::Input(format!("{w}: {e}"))
        }
        _ => CliError::Verification(format!("{w}: {e}")),
    }
}

/// A single object for one word, an array for several.
fn json_document(mut items: Vec<Value>) -> String {
    let doc = if items.len() == 1 { items.remove(0) } else { Value::Array(items) };
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn versioned<T: Serialize>(body: &T) -> Value {
    let mut v = serde_json::to_value(body).expect("report types always serialize");
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    v
}

pub fn build(input: &WordInput, f: Format) -> Result<String, CliError> {
    let mut text = String::new();
    let mut items = Vec::new();
    for w in read_words(input)? {
        let t = triangulation(&w)?;
        let sig = encode(&t);
        if f.isosig {
            text.push_str(&sig);
            text.push('\n');
        } else if f.json {
            items.push(versioned(&json!({
                "word": w.normalize().to_string(),
                "tet_count": t.tet_count(),
                "isosig": sig,
                "triangulation": t.to_record(),
            })));
        } else {
            text.push_str(&format!("# {} ({} tetrahedra, {sig})\n", w.normalize(), t.tet_count()));
            text.push_str(&t.gluing_table());
        }
    }
    Ok(if f.json && !f.isosig { json_document(items) } else { text })
}

pub fn edges(input: &WordInput, f: Format) -> Result<String, CliError> {
    let mut text = String::new();
    let mut items = Vec::new();
    if f.csv {
        text.push_str("word,class,degree,distinct_tets\n");
    }
    for w in read_words(input)? {
        let t = triangulation(&w)?;
        let classes = t.edge_classes();
        let predicates = degree_predicates(&t, &w.normalize());
        let name = w.normalize().to_string();
        if f.json {
            items.push(versioned(&json!({
                "word": name,
                "tet_count": t.tet_count(),
                "degrees": classes.degrees(),
                "classes": classes,
                "predicates": predicates,
            })));
        } else if f.csv {
            for (i, c) in classes.classes.iter().enumerate() {
                text.push_str(&format!("{name},{i},{},{}\n", c.degree(), c.distinct_tets()));
            }
        } else {
            text.push_str(&format!(
                "# {name}: {} edge classes, {} tetrahedra\n",
                classes.len(),
                t.tet_count()
            ));
            text.push_str("class  degree  tets\n");
            for (i, c) in classes.classes.iter().enumerate() {
                text.push_str(&format!("{i:>5}  {:>6}  {:>4}\n", c.degree(), c.distinct_tets()));
            }
            text.push_str(&format!(
                "degree 3: present {}, predicted {}\ndegree 4: present {}, predicted {}\n",
                predicates.has_degree3,
                predicates.predicted_degree3,
                predicates.has_degree4,
                predicates.predicted_degree4
            ));
        }
    }
    Ok(if f.json { json_document(items) } else { text })
}

pub fn simplify(input: &WordInput, f: Format) -> Result<String, CliError> {
    let mut text = String::new();
    let mut items = Vec::new();
    for w in read_words(input)? {
        let t = triangulation(&w)?;
        let (s, trace) = simplify_moves(&t);
        if !s.validate().passed() {
            return Err(CliError::Verification(format!("{w}: simplified triangulation is invalid")));
        }
        let sig = encode(&s);
        if f.isosig {
            text.push_str(&sig);
            text.push('\n');
        } else if f.json {
            items.push(versioned(&json!({
                "word": w.normalize().to_string(),
                "initial_tets": t.tet_count(),
                "final_tets": s.tet_count(),
                "trace": trace,
                "isosig": sig,
            })));
        } else {
            text.push_str(&format!(
                "# {}: {} -> {} tetrahedra\n",
                w.normalize(),
                t.tet_count(),
                s.tet_count()
            ));
            for e in &trace {
                let axis = e.axis.map(|a| format!(" axis {a}")).unwrap_or_default();
                let kind = serde_json::to_value(e.kind).expect("move kinds serialize");
                let kind = kind.as_str().unwrap_or_default().to_string();
                text.push_str(&format!("{kind} on {}{axis} -> {} tetrahedra\n", e.target, e.tets_after));
            }
            text.push_str(&format!("isosig {sig}\n"));
        }
    }
    Ok(if f.json && !f.isosig { json_document(items) } else { text })
}

pub fn blocks(input: &WordInput, f: Format) -> Result<String, CliError> {
    let mut text = String::new();
    let mut items = Vec::new();
    for w in read_words(input)? {
        let a = family_exponents(&w)?;
        let d = decompose_exponents(&a).map_err(|e| CliError::Input(format!("{w}: {e}")))?;
        if f.json {
            items.push(versioned(&json!({ "word": w.normalize().to_string(), "decomposition": d })));
        } else {
            text.push_str(&format!("# {}: inner exponents {a:?}\n", w.normalize()));
            text.push_str("kind          start  end  exponents       m  p  k\n");
            for b in &d.blocks {
                let kind = serde_json::to_value(b.kind).expect("block kinds serialize");
                text.push_str(&format!(
                    "{:<12}  {:>5}  {:>3}  {:<14}  {}  {}  {}\n",
                    kind.as_str().unwrap_or_default(),
                    b.span.0,
                    b.span.1,
                    format!("{:?}", d.block_exponents(b)),
                    b.m,
                    b.p,
                    b.k
                ));
            }
        }
    }
    Ok(if f.json { json_document(items) } else { text })
}

pub fn angles(input: &WordInput, f: Format) -> Result<String, CliError> {
    let mut text = String::new();
    let mut items = Vec::new();
    let mut failures = Vec::new();
    for w in read_words(input)? {
        let w = w.normalize();
        let a = family_exponents(&w)?;
        let d = decompose_exponents(&a).map_err(|e| CliError::Input(format!("{w}: {e}")))?;
        let t = triangulation(&w)?;
        let assignment = assign_angles(&w, &d).map_err(|e| CliError::Verification(format!("{w}: {e}")))?;
        let tet_angles =
            expand_to_tetrahedra(&assignment, &t).map_err(|e| CliError::Verification(format!("{w}: {e}")))?;
        let report = verify_angle_structure(&t, &tet_angles);
        if !report.passed() {
            failures.push(w.to_string());
        }
        if f.json {
            items.push(versioned(&json!({
                "word": w.to_string(),
                "layers": assignment.layers,
                "verification": report,
                "passed": report.passed(),
            })));
        } else {
            text.push_str(&format!("# {w}\nlayer  shape  horizontal  vertical  diagonal\n"));
            for (i, l) in assignment.layers.iter().enumerate() {
                text.push_str(&format!(
                    "{i:>5}  {:<5}  {:<10}  {:<8}  {}\n",
                    l.shape.name(),
                    l.triple[0].to_string(),
                    l.triple[1].to_string(),
                    l.triple[2]
                ));
            }
            text.push_str(&format!("verification {}\n", if report.passed() { "passed" } else { "FAILED" }));
        }
    }
    let out = if f.json { json_document(items) } else { text };
    if failures.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Verification(format!("angle equations fail for {}", failures.join(", "))))
    }
}

#[derive(Serialize)]
struct VolumeRow {
    word: String,
    tet_count: usize,
    v3: f64,
    explicit_volume: Option<f64>,
    explicit_ratio: Option<f64>,
    maximized_volume: f64,
    maximized_ratio: f64,
    gradient_norm: f64,
    iterations: usize,
}

pub fn volume(input: &WordInput, m: MaximizerArgs, f: Format) -> Result<String, CliError> {
    let options = MaximizeOptions { tolerance: m.tolerance, max_iters: m.max_iters };
    let mut rows = Vec::new();
    for w in read_words(input)? {
        let w = w.normalize();
        let t = triangulation(&w)?;
        let in_family = w.family_exponents().is_some_and(|a| a.iter().all(|&e| e == 1 || e == 2));
        let explicit =
            if in_family { Some(explicit_volume(&w).map_err(|e| volume_error(&w, e))?) } else { None };
        let max = maximize_volume(&t, explicit.as_ref().map(|e| &e.assignment), &options)
            .map_err(|e| volume_error(&w, e))?;
        rows.push(VolumeRow {
            word: w.to_string(),
            tet_count: t.tet_count(),
            v3: v3(),
            explicit_volume: explicit.as_ref().map(|e| e.volume),
            explicit_ratio: explicit.as_ref().map(|e| e.ratio),
            maximized_volume: max.volume,
            maximized_ratio: max.volume / v3(),
            gradient_norm: max.gradient_norm,
            iterations: max.iterations,
        });
    }
    Ok(if f.json {
        json_document(rows.iter().map(versioned).collect())
    } else {
        let mut text = String::from(
            "word                tets  explicit      ratio    maximized     ratio    gradient\n",
        );
        for r in &rows {
            text.push_str(&format!(
                "{:<18}  {:>4}  {:<12}  {:<7}  {:<12.10}  {:<7.4}  {:.2e}\n",
                r.word,
                r.tet_count,
                output::opt(r.explicit_volume, 10),
                output::opt(r.explicit_ratio, 4),
                r.maximized_volume,
                r.maximized_ratio,
                r.gradient_norm
            ));
        }
        text
    })
}

fn bounds_rows(reports: &[BoundsReport], f: Format) -> String {
    if f.json {
        json_document(reports.iter().map(versioned).collect())
    } else if f.csv {
        output::bounds_csv(reports)
    } else {
        output::bounds_table(reports)
    }
}

pub fn bounds(input: &WordInput, f: Format) -> Result<String, CliError> {
    let reports = read_words(input)?
        .iter()
        .map(|w| bounds_report(w).map_err(|e| volume_error(w, e)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(bounds_rows(&reports, f))
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("TWOBRIDGE_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            CliError::Input(format!("TWOBRIDGE_THREADS must be a positive integer, got {v:?}"))
        })?;
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| CliError::Input(format!("cannot start worker threads: {e}")))
}

pub fn survey(max_n: usize, c: Option<u32>, exponents: &[u32], f: Format) -> Result<String, CliError> {
    let words: Vec<Word> =
        enumerate_words(max_n, exponents, c).map_err(|e| CliError::Input(e.to_string()))?.collect();
    let pool = thread_pool()?;
    // Indexed parallel collection keeps enumeration order.
    let reports = pool.install(|| {
        words
            .par_iter()
            .map(|w| bounds_report(w).map_err(|e| volume_error(w, e)))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let f = if f.json { f } else { Format { csv: true, ..f } };
    Ok(bounds_rows(&reports, f))
}
