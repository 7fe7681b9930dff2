use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::json;
use tess_core::curvature::curvature_scan;
use tess_core::generate::check_regular_params;
use tess_core::metric::{
    check_forbidden_alternation, check_lemma28, cut_locus, distance_ball, enumerate_sphere, growth_report,
    k_neighborhood, layers_with_margin, sphere_faces_touch_boundary, MetricError,
};
use tess_core::rational::format_rational;
use tess_core::spectral::{
    cse_search, unique_continuation_trace, verify, Certificate, EllipticOperator, SpectralError, SupportSet, UcInput,
};
use tess_core::{
    load_patch, save_patch, validate_patch, FaceId, GenError, GenSpec, PatchError, TessellationPatch, VertexId,
};

use crate::render::{render_svg, RenderError};
use crate::{Common, Expect, Format, OperatorArgs, OperatorKind, Source, SupportSpec};

#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Property(String),
    /// Exit 2.
    Usage(String),
}

type Run = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::Margin { .. }
            | MetricError::Patch(PatchError::UnknownFace(_) | PatchError::UnknownVertex(_)) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Property(e.to_string()),
        }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Metric(m) => m.into(),
            SpectralError::Margin(_)
            | SpectralError::InvalidArgument(_)
            | SpectralError::Patch(PatchError::UnknownFace(_) | PatchError::UnknownVertex(_)) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Property(e.to_string()),
        }
    }
}

fn spec(source: &Source, default_radius: Option<usize>) -> Result<GenSpec, Failure> {
    let n = source.input.is_some() as usize + source.regular.is_some() as usize + source.kagome as usize;
    if n != 1 {
        return Err(usage("give exactly one of --input, --regular P Q, --kagome"));
    }
    if let Some(path) = &source.input {
        if source.radius.is_some() {
            return Err(usage("--radius applies to generated patches, not --input"));
        }
        return Ok(GenSpec { kind: tess_core::TilingKind::FromFile(path.clone()), radius: 0 });
    }
    let radius = source.radius.or(default_radius).ok_or_else(|| usage("--radius is required"))?;
    match &source.regular {
        Some(pq) => {
            let (p, q) = (pq[0], pq[1]);
            check_regular_params(p, q).map_err(|e| usage(e.to_string()))?;
            Ok(GenSpec::regular(p, q, radius))
        }
        None => Ok(GenSpec::kagome(radius)),
    }
}

fn build(spec: &GenSpec) -> Result<(TessellationPatch, FaceId), Failure> {
    spec.build().map_err(|e| match e {
        GenError::TooLarge { .. } | GenError::Inconsistent(_) => Failure::Property(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    })
}

/// Loads or generates the patch, checks it, and resolves the base face.
fn load(source: &Source, default_radius: usize) -> Result<(TessellationPatch, FaceId), Failure> {
    let (patch, base) = build(&spec(source, Some(default_radius))?)?;
    if source.input.is_some() {
        let report = validate_patch(&patch);
        if !report.is_empty() {
            return Err(usage(format!("input patch is not valid:\n{}", report.to_string().trim_end())));
        }
    }
    match source.face {
        Some(f) if patch.contains_face(FaceId(f)) => Ok((patch, FaceId(f))),
        Some(f) => Err(usage(format!("unknown face {f}"))),
        None => Ok((patch, base)),
    }
}

fn table_format(format: Option<Format>) -> Result<Format, Failure> {
    match format {
        None | Some(Format::Tsv) => Ok(Format::Tsv),
        Some(Format::Jsonl) => Ok(Format::Jsonl),
        Some(Format::Svg) => Err(usage("--format svg is only available for render")),
    }
}

fn jsonl(out: &mut String, value: serde_json::Value) {
    out.push_str(&value.to_string());
    out.push('\n');
}

pub fn generate(source: &Source, out: &mut String) -> Run {
    let spec = spec(source, None)?;
    let (patch, _) = build(&spec)?;
    out.push_str(&save_patch(&patch));
    eprintln!(
        "faces={} vertices={} complete_vertices={}",
        patch.face_count(),
        patch.vertex_count(),
        patch.complete_vertices().len()
    );
    Ok(())
}

pub fn validate(c: &Common, out: &mut String) -> Run {
    let format = table_format(c.format)?;
    let spec = spec(&c.source, Some(3))?;
    let patch = match &spec.kind {
        tess_core::TilingKind::FromFile(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            load_patch(&text).map_err(|e| usage(e.to_string()))?
        }
        _ => build(&spec)?.0,
    };
    let report = validate_patch(&patch);
    let scan = curvature_scan(&patch);
    let curvature = if scan.nonpositive() {
        "nonpositive".to_string()
    } else {
        format!("positive at {} corners", scan.positive.len())
    };
    let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    match format {
        Format::Jsonl => jsonl(
            out,
            json!({
                "faces": patch.face_count(),
                "vertices": patch.vertex_count(),
                "complete_vertices": patch.complete_vertices().len(),
                "violations": violations,
                "curvature": curvature,
            }),
        ),
        _ => {
            let _ = writeln!(out, "faces\t{}", patch.face_count());
            let _ = writeln!(out, "vertices\t{}", patch.vertex_count());
            let _ = writeln!(out, "complete_vertices\t{}", patch.complete_vertices().len());
            let _ = writeln!(out, "violations\t{}", violations.len());
            let _ = writeln!(out, "curvature\t{curvature}");
            for v in &violations {
                let _ = writeln!(out, "violation\t{v}");
            }
        }
    }
    if report.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(format!("{} violations", violations.len())))
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn verify_geometry(c: &Common, kmax: usize, out: &mut String) -> Run {
    let format = table_format(c.format)?;
    let (patch, f0) = load(&c.source, kmax + 2)?;
    layers_with_margin(&patch, &[f0], kmax + 2, kmax + 2)?;
    let scan = curvature_scan(&patch);
    let advisory = !scan.nonpositive();
    let gate = if advisory {
        format!("hypothesis not met ({} corners with positive curvature); advisory mode", scan.positive.len())
    } else {
        "nonpositive".to_string()
    };
    if format == Format::Tsv {
        let _ = writeln!(out, "# curvature\t{gate}");
        let _ = writeln!(out, "k\tadmissible\ttube\tcut_locus\tsphere_edge\talternation\tbelabel\tnotes");
    } else {
        jsonl(out, json!({ "curvature": gate, "advisory": advisory }));
    }

    let cut = cut_locus(&patch, f0, kmax);
    let layers = layers_with_margin(&patch, &[f0], kmax, kmax)?;
    let mut failures = 0;
    for k in 0..=kmax {
        let mut notes: Vec<String> = Vec::new();
        let mut note = |what: &str, e: &dyn std::fmt::Display| notes.push(format!("{what}: {e}"));

        let ball = distance_ball(&patch, f0, k);
        let admissible = match &ball {
            Ok(b) => match b.is_admissible() {
                Ok(true) => true,
                Ok(false) => {
                    note("admissible", &"label sequence not admissible");
                    false
                }
                Err(e) => {
                    note("admissible", &e);
                    false
                }
            },
            Err(e) => {
                note("ball", e);
                false
            }
        };
        let tube_and_labels = ball.as_ref().ok().map(|b| {
            let tube = k_neighborhood(b, 1)?;
            let mut why = Vec::new();
            let runs = b.tube_violations(&tube).len();
            if runs > 0 {
                why.push(format!("{runs} neighbourhood faces meet a boundary in a broken run"));
            }
            if !tube.is_admissible()? {
                why.push("neighbourhood not admissible".to_string());
            }
            let touching = sphere_faces_touch_boundary(&patch, f0, k)?.len();
            if touching > 0 {
                why.push(format!("{touching} sphere faces have no edge on the boundary"));
            }
            Ok::<_, MetricError>((why, b.belabel_violations(&tube)?.len()))
        });
        let (tube, belabel) = match tube_and_labels {
            Some(Ok((why, bad_labels))) => {
                if !why.is_empty() {
                    note("tube", &why.join(", "));
                }
                if bad_labels > 0 {
                    note("belabel", &format!("{bad_labels} violations"));
                }
                (why.is_empty(), bad_labels == 0)
            }
            Some(Err(e)) => {
                note("tube", &e);
                (false, false)
            }
            None => (false, false),
        };
        let cut_ok = match &cut {
            Ok(faces) => {
                let here: Vec<String> =
                    faces.iter().filter(|f| layers.distance(**f) == Some(k)).map(ToString::to_string).collect();
                if !here.is_empty() {
                    note("cut_locus", &here.join(","));
                }
                here.is_empty()
            }
            Err(e) => {
                note("cut_locus", e);
                false
            }
        };
        let lemma = match enumerate_sphere(&patch, f0, k).and_then(|en| check_lemma28(&en, &patch, f0, k)) {
            Ok(_) => true,
            Err(e) => {
                note("sphere_edge", &e);
                false
            }
        };
        let alternation = match check_forbidden_alternation(&patch, f0, k) {
            Ok(found) => {
                if found {
                    note("alternation", &"forbidden label pattern present");
                }
                !found
            }
            Err(e) => {
                note("alternation", &e);
                false
            }
        };
        let all = admissible && tube && cut_ok && lemma && alternation && belabel;
        failures += usize::from(!all);
        let notes = if notes.is_empty() { "-".to_string() } else { notes.join("; ") };
        match format {
            Format::Jsonl => jsonl(
                out,
                json!({
                    "k": k, "admissible": admissible, "tube": tube, "cut_locus": cut_ok,
                    "sphere_edge": lemma, "alternation": alternation, "belabel": belabel, "notes": notes,
                }),
            ),
            _ => {
                let _ = writeln!(
                    out,
                    "{k}\t{}\t{}\t{}\t{}\t{}\t{}\t{notes}",
                    pass(admissible),
                    pass(tube),
                    pass(cut_ok),
                    pass(lemma),
                    pass(alternation),
                    pass(belabel)
                );
            }
        }
    }
    if failures > 0 && !advisory {
        return Err(Failure::Property(format!("geometry checks failed for {failures} values of k")));
    }
    Ok(())
}

fn operator<'p>(patch: &'p TessellationPatch, args: &OperatorArgs, seed: u64) -> Result<EllipticOperator<'p>, Failure> {
    Ok(match args.operator {
        OperatorKind::Random => {
            if args.magnitude == 0 {
                return Err(usage("--magnitude must be at least 1"));
            }
            EllipticOperator::random(patch, seed, args.magnitude)?
        }
        OperatorKind::Adjacency => EllipticOperator::adjacency(patch),
        OperatorKind::Laplacian => EllipticOperator::laplacian(patch),
    })
}

fn support(patch: &TessellationPatch, spec: &SupportSpec) -> Result<SupportSet, Failure> {
    Ok(match spec {
        SupportSpec::Ball { center, r } => SupportSet::ball(patch, VertexId(*center), *r)?,
        SupportSpec::List(ids) => SupportSet::new(patch, ids.iter().map(|&v| VertexId(v)))?,
        SupportSpec::Face(f) => SupportSet::face(patch, FaceId(*f))?,
    })
}

pub fn cse(c: &Common, args: &OperatorArgs, specs: &[SupportSpec], expect: Option<Expect>, out: &mut String) -> Run {
    let format = table_format(c.format)?;
    let (patch, _) = load(&c.source, 5)?;
    let supports: Vec<(String, SupportSet)> =
        specs.iter().map(|s| Ok((s.to_string(), support(&patch, s)?))).collect::<Result<_, Failure>>()?;
    let seeds: Vec<Option<u64>> = match args.operator {
        OperatorKind::Random => args.seed.iter().copied().map(Some).collect(),
        _ => vec![None],
    };
    let ops: Vec<(Option<u64>, EllipticOperator<'_>)> =
        seeds.iter().map(|&s| Ok((s, operator(&patch, args, s.unwrap_or(0))?))).collect::<Result<_, Failure>>()?;
    let jobs: Vec<(usize, usize)> = (0..supports.len()).flat_map(|i| (0..ops.len()).map(move |j| (i, j))).collect();

    let results: Vec<Result<(Certificate, bool), SpectralError>> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (op, s) = (&ops[j].1, &supports[i].1);
            let cert = cse_search(op, s)?;
            let ok = verify(op, s, &cert)?;
            Ok((cert, ok))
        })
        .collect();

    if format == Format::Tsv {
        let _ = writeln!(out, "seed\tsupport\tsize\tcertificate");
    }
    let (mut found, mut unverified) = (0usize, 0usize);
    for (&(i, j), result) in jobs.iter().zip(results) {
        let (cert, ok) = result?;
        found += usize::from(cert.is_found());
        unverified += usize::from(!ok);
        let seed = ops[j].0.map_or("-".to_string(), |s| s.to_string());
        let (name, s) = &supports[i];
        match format {
            Format::Jsonl => jsonl(
                out,
                json!({
                    "seed": ops[j].0, "support": name, "size": s.len(),
                    "found": cert.is_found(), "verified": ok, "certificate": cert.to_string(),
                }),
            ),
            _ => {
                let _ = writeln!(out, "{seed}\t{name}\t{}\t{cert}", s.len());
            }
        }
    }
    let total = jobs.len();
    match format {
        Format::Jsonl => {
            jsonl(out, json!({ "summary": { "total": total, "found": found, "notfound": total - found } }))
        }
        _ => {
            let _ = writeln!(out, "# total={total} found={found} notfound={}", total - found);
        }
    }
    if unverified > 0 {
        return Err(Failure::Property(format!("{unverified} certificates failed re-verification")));
    }
    match expect {
        Some(Expect::None) if found > 0 => Err(Failure::Property(format!("expected no eigenfunctions, found {found}"))),
        Some(Expect::Some) if found == 0 => Err(Failure::Property("expected an eigenfunction, found none".into())),
        _ => Ok(()),
    }
}

pub fn uc_trace(c: &Common, args: &OperatorArgs, kmax: usize, out: &mut String) -> Run {
    let format = table_format(c.format)?;
    let (patch, f0) = load(&c.source, kmax + 2)?;
    let seed = args.seed.first().copied().unwrap_or(1);
    let op = operator(&patch, args, seed)?;
    let trace = unique_continuation_trace(&op, f0, &UcInput::Symbolic, kmax)?;
    let ids = |vs: &[VertexId]| -> String {
        if vs.is_empty() {
            "-".into()
        } else {
            vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        }
    };
    let op_name = match args.operator {
        OperatorKind::Random => format!("random seed={seed}"),
        OperatorKind::Adjacency => "adjacency".into(),
        OperatorKind::Laplacian => "laplacian".into(),
    };
    match format {
        Format::Jsonl => {
            jsonl(out, json!({ "f0": f0.0, "kmax": kmax, "operator": op_name }));
            for layer in &trace.layers {
                let elims: Vec<_> = layer
                    .eliminations
                    .iter()
                    .map(|e| {
                        json!({
                            "vertex": e.vertex.0, "equation_at": e.equation_at.0,
                            "coefficient": format_rational(&e.coefficient), "rule": e.rule.to_string(),
                        })
                    })
                    .collect();
                let boundary: Vec<u32> = layer.boundary.iter().map(|v| v.0).collect();
                let stalled: Vec<u32> = layer.stalled.iter().map(|v| v.0).collect();
                jsonl(out, json!({ "k": layer.k, "boundary": boundary, "eliminations": elims, "stalled": stalled }));
            }
            jsonl(out, json!({ "success": trace.success, "failure": trace.failure }));
        }
        _ => {
            let _ = writeln!(out, "# f0={f0} kmax={kmax} operator={op_name}");
            for layer in &trace.layers {
                let forced: Vec<VertexId> = layer.eliminations.iter().map(|e| e.vertex).collect();
                let _ = writeln!(
                    out,
                    "layer\t{}\t{}\t{}\t{}",
                    layer.k,
                    ids(&layer.boundary),
                    ids(&forced),
                    ids(&layer.stalled)
                );
                for e in &layer.eliminations {
                    let _ = writeln!(
                        out,
                        "elim\t{}\t{}\t{}\t{}\t{}",
                        layer.k,
                        e.vertex,
                        e.equation_at,
                        format_rational(&e.coefficient),
                        e.rule
                    );
                }
            }
            match &trace.failure {
                None => out.push_str("result\tsuccess\n"),
                Some(msg) => {
                    let _ = writeln!(out, "result\tfailure {msg}");
                }
            }
        }
    }
    match trace.failure {
        None if trace.success => Ok(()),
        None => Err(Failure::Property("trace did not succeed".into())),
        Some(msg) => Err(Failure::Property(msg)),
    }
}

pub fn growth(c: &Common, kmax: usize, out: &mut String) -> Run {
    let format = table_format(c.format)?;
    let (patch, f0) = load(&c.source, kmax + 1)?;
    let rows = growth_report(&patch, f0, kmax)?;
    if format == Format::Tsv {
        out.push_str("k\tball\tsphere\tmean_chi\tratio\n");
    }
    for r in rows {
        let (chi, ratio) = (format_rational(&r.mean_chi), format_rational(&r.ratio()));
        match format {
            Format::Jsonl => {
                jsonl(out, json!({ "k": r.k, "ball": r.ball, "sphere": r.sphere, "mean_chi": chi, "ratio": ratio }))
            }
            _ => {
                let _ = writeln!(out, "{}\t{}\t{}\t{chi}\t{ratio}", r.k, r.ball, r.sphere);
            }
        }
    }
    Ok(())
}

pub fn render(c: &Common, out: &mut String) -> Run {
    if matches!(c.format, Some(Format::Tsv | Format::Jsonl)) {
        return Err(usage("render only writes --format svg"));
    }
    let spec = spec(&c.source, Some(3))?;
    let (patch, _) = match &spec.kind {
        tess_core::TilingKind::FromFile(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let patch = load_patch(&text).map_err(|e| usage(e.to_string()))?;
            (patch, FaceId(0))
        }
        _ => build(&spec)?,
    };
    match render_svg(&patch) {
        Ok(svg) => {
            out.push_str(&svg);
            Ok(())
        }
        Err(RenderError::Empty) => Err(usage("patch has no faces")),
        Err(e) => Err(Failure::Property(e.to_string())),
    }
}
