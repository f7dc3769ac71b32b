//! One function per subcommand. Each parses its input, runs the relevant
//! part of the pipeline and returns a report or the refusing stage.

use mixsing::invariants::{self, LinkConfig, Route};
use mixsing::nondegen::{self, Mode, ProbeConfig};
use mixsing::{classify, newton, toric, MixedPolynomial, WeightVector};

use crate::report::*;
use crate::{AtStage, CliError, Stage};

/// Parse with at least `min_n` variables.
pub fn parse(expr: &str, min_n: usize) -> Result<MixedPolynomial, CliError> {
    let f = MixedPolynomial::parse(expr).at(Stage::Parse)?;
    if f.nvars() >= min_n {
        return Ok(f);
    }
    MixedPolynomial::parse_with(expr, Some(min_n)).at(Stage::Parse)
}

fn weight_for(f: &MixedPolynomial, w: &[i64]) -> Result<WeightVector, CliError> {
    if w.len() != f.nvars() {
        return Err(CliError::new(
            Stage::Newton,
            mixsing::Error::Precondition(format!("weight has {} entries for n = {}", w.len(), f.nvars())),
        ));
    }
    Ok(WeightVector::new(w.to_vec()))
}

/// Boundary of a planar polynomial, or the face for one weight in any
/// dimension.
pub fn newton(expr: &str, weight: Option<&[i64]>) -> Result<NewtonReport, CliError> {
    let f = parse(expr, 2)?;
    let (boundary, face) = match weight {
        Some(w) => {
            let p = weight_for(&f, w)?;
            let fc = newton::face(&f, &p).at(Stage::Newton)?;
            (None, Some(FaceOut::new(&f, &fc)))
        }
        None => {
            let b = newton::boundary2d(&f).at(Stage::Newton)?;
            (Some(NewtonOut::new(&f, &b)), None)
        }
    };
    Ok(NewtonReport { schema: SCHEMA, command: "newton", input: Input::of(&f), boundary, face })
}

/// Vertex polyline of the boundary as `x,y` CSV with a header line.
pub fn plot_data(expr: &str) -> Result<String, CliError> {
    let f = parse(expr, 2)?;
    let b = newton::boundary2d(&f).at(Stage::Newton)?;
    let mut out = String::from("x,y\n");
    for v in &b.vertices {
        out.push_str(&format!("{},{}\n", v.point[0], v.point[1]));
    }
    Ok(out)
}

fn fan_of(f: &MixedPolynomial) -> Result<FanOut, CliError> {
    let d = newton::dual_diagram(f).at(Stage::Toric)?;
    let fan = toric::regular_subdivide(&d);
    let last = fan.vertices.len() - 1;
    let mut mult = Vec::with_capacity(fan.vertices.len());
    for j in 0..fan.vertices.len() {
        mult.push(match j {
            0 => None,
            j if j == last => None,
            j => Some(toric::multiplicity(f, &fan.weight(j)).at(Stage::Toric)?),
        });
    }
    let gammas = (1..=fan.interior_len())
        .map(|j| toric::transition_gamma(&fan, j).map(|t| t.gamma))
        .collect::<mixsing::Result<Vec<_>>>()
        .at(Stage::Toric)?;
    Ok(FanOut::new(&d.rays, &fan, mult, gammas))
}

pub fn fan(expr: &str) -> Result<FanReport, CliError> {
    let f = parse(expr, 2)?;
    newton::boundary2d(&f).at(Stage::Newton)?;
    Ok(FanReport { schema: SCHEMA, command: "fan", input: Input::of(&f), fan: fan_of(&f)? })
}

fn curve(f: &MixedPolynomial, seed: u64) -> Result<invariants::CurveInvariants, CliError> {
    let cfg = LinkConfig { seed, ..LinkConfig::default() };
    invariants::curve_invariants(f, &cfg).at(Stage::Invariants)
}

/// The full pipeline for a planar curve.
pub fn analyze(expr: &str, seed: u64) -> Result<AnalysisReport, CliError> {
    let f = parse(expr, 2)?;
    let b = newton::boundary2d(&f).at(Stage::Newton)?;
    let newton_out = NewtonOut::new(&f, &b);
    let classification = ClassificationOut::new(&f, &b);
    let cfg = ProbeConfig { seed, ..ProbeConfig::default() };
    let check = nondegen::check_all(&f, Mode::NonDegenerate, &cfg).at(Stage::Nondegen)?;
    let nondegeneracy = NondegOut::new("nondegenerate", &check);
    let fan = fan_of(&f)?;
    let inv = curve(&f, seed)?;

    let mut warnings = Vec::new();
    if !newton_out.convenient {
        warnings.push("newton: the boundary misses a coordinate axis".to_string());
    }
    for face in &nondegeneracy.faces {
        if face.verdict.kind != "NoCriticalPointFound" {
            warnings.push(format!(
                "nondegen: face of weight {:?} on variables {:?}: {}",
                face.weight, face.vars, face.verdict.kind
            ));
        }
    }
    warnings.extend(inv.warnings.iter().map(|w| format!("invariants: {w}")));
    Ok(AnalysisReport {
        schema: SCHEMA,
        command: "analyze",
        input: Input::of(&f),
        seed,
        newton: newton_out,
        classification,
        nondegeneracy,
        fan,
        invariants: InvariantsOut::from(&inv),
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeMode {
    NonDegenerate,
    Strong,
    True,
    SuperStrong,
}

impl ProbeMode {
    pub fn name(self) -> &'static str {
        match self {
            ProbeMode::NonDegenerate => "nondegenerate",
            ProbeMode::Strong => "strong",
            ProbeMode::True => "true",
            ProbeMode::SuperStrong => "super_strong",
        }
    }
}

/// Critical point search over every face, or over the single face of
/// `weight` when given.
pub fn probe(expr: &str, mode: ProbeMode, cfg: &ProbeConfig, weight: Option<&[i64]>) -> Result<ProbeReport, CliError> {
    let f = parse(expr, 1)?;
    cfg.validate().at(Stage::Nondegen)?;
    let settings = ProbeSettings { seed: cfg.seed, starts: cfg.starts, iters: cfg.iters };
    let report = |verdict, clean, faces, partial_faces| ProbeReport {
        schema: SCHEMA,
        command: "probe",
        input: Input::of(&f),
        settings: settings.clone(),
        mode: mode.name(),
        verdict,
        clean,
        faces,
        partial_faces,
    };
    if let Some(w) = weight {
        let p = weight_for(&f, w)?;
        let fc = newton::face(&f, &p).at(Stage::Nondegen)?;
        let v = match mode {
            ProbeMode::NonDegenerate => nondegen::probe_face_nondegenerate(&f, &p, cfg),
            ProbeMode::Strong => nondegen::probe_face_strong(&f, &p, cfg),
            ProbeMode::True | ProbeMode::SuperStrong => Err(mixsing::Error::Precondition(format!(
                "mode {} works on all faces; drop --weight",
                mode.name()
            ))),
        }
        .at(Stage::Nondegen)?;
        let out = single_face(&f, &p, &fc, &v);
        return Ok(report(Some(out.verdict.clone()), v.kind.is_clean(), vec![out], None));
    }
    let (check, partial) = match mode {
        ProbeMode::NonDegenerate => (nondegen::check_all(&f, Mode::NonDegenerate, cfg), None),
        ProbeMode::Strong => (nondegen::check_all(&f, Mode::Strong, cfg), None),
        ProbeMode::True => (nondegen::check_all(&f, Mode::True, cfg), None),
        ProbeMode::SuperStrong => {
            let r = nondegen::ssnd_check(&f, cfg).at(Stage::Nondegen)?;
            let holds = r.holds();
            (Ok(r.strong), Some((r.partial, holds)))
        }
    };
    let check = check.at(Stage::Nondegen)?;
    let mut worst = check.worst().cloned();
    let mut clean = check.is_clean();
    let partial_faces = partial.map(|(faces, holds)| {
        clean = holds;
        for fv in &faces {
            if !fv.verdict.kind.is_clean() && worst.as_ref().is_none_or(|w| w.is_clean()) {
                worst = Some(fv.verdict.kind.clone());
            }
        }
        faces.iter().map(FaceVerdictOut::from).collect()
    });
    Ok(report(
        worst.as_ref().map(VerdictOut::from),
        clean,
        check.faces.iter().map(FaceVerdictOut::from).collect(),
        partial_faces,
    ))
}

/// Link components: tracked directly for radially weighted homogeneous
/// curves, summed over the faces otherwise.
pub fn lkn(expr: &str, steps: usize, seed: u64) -> Result<LknReport, CliError> {
    let f = parse(expr, 2)?;
    let homogeneous = classify::radial_type(&f).is_some();
    let (lkn, tracker, faces) = if homogeneous {
        let t = invariants::lkn_numeric(&f, steps, seed).at(Stage::Invariants)?;
        (Valued { value: t.lkn() as i64, route: Route::Tracker.name() }, Some(TrackerOut::from(&t)), None)
    } else {
        let (total, recs) =
            invariants::lkn_total(&f, &LinkConfig { steps, seed }).at(Stage::Invariants)?;
        let route = if recs.iter().any(|r| r.r_route == Route::Tracker) { Route::Tracker } else { Route::FaceFormula };
        (Valued { value: total, route: route.name() }, None, Some(recs.iter().map(FaceRecordOut::from).collect()))
    };
    Ok(LknReport { schema: SCHEMA, command: "lkn", input: Input::of(&f), seed, steps, lkn, tracker, faces })
}

pub fn zeta(expr: &str, seed: u64) -> Result<ZetaReport, CliError> {
    let f = parse(expr, 2)?;
    let inv = InvariantsOut::from(&curve(&f, seed)?);
    Ok(ZetaReport {
        schema: SCHEMA,
        command: "zeta",
        input: Input::of(&f),
        seed,
        zeta: inv.zeta,
        char_poly: inv.char_poly,
        mu: inv.mu,
        chi_f: inv.chi_f,
        warnings: inv.warnings,
    })
}

pub fn error_report(command: &str, e: &CliError) -> ErrorReport {
    ErrorReport {
        schema: SCHEMA,
        command: command.to_string(),
        error: ErrorOut {
            stage: e.stage.name(),
            kind: e.kind(),
            message: e.error.to_string(),
            exit_code: e.exit_code(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_example_boundary() {
        let r = newton("z1^3*zb1^2 + z1^2*z2^2 + z2^3*zb2", None).unwrap();
        let b = r.boundary.unwrap();
        let e: Vec<_> = b.edges.iter().map(|e| (e.weight.clone(), e.d_value)).collect();
        assert_eq!(e, vec![(vec![2, 3], 10), (vec![1, 1], 4)]);
        assert!(b.convenient && b.simple_vertices);
    }

    #[test]
    fn newton_refusals() {
        let e = newton("0", None).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("empty Newton boundary"));
        let e = newton("z1 + z2 + z3", None).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let r = newton("z1^2 + z2^2 + z3^3", Some(&[3, 3, 2])).unwrap();
        assert_eq!(r.face.unwrap().d_value, 6);
        assert_eq!(newton("z1 +", None).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn plot_csv() {
        assert_eq!(plot_data("z2^2 - z1^3").unwrap(), "x,y\n3,0\n0,2\n");
    }

    #[test]
    fn fan_of_cusp() {
        let r = fan("z2^2 - z1^3").unwrap().fan;
        assert_eq!(r.vertices, vec![[1, 0], [1, 1], [2, 3], [1, 2], [0, 1]]);
        // d((1,2)) = min(3, 4) = 3.
        assert_eq!(r.multiplicities, vec![None, Some(2), Some(6), Some(3), None]);
        assert!(r.regular);
    }

    #[test]
    fn analyze_stage_names() {
        let e = analyze("z1^3 + z1^2*zb1 + z2^2", 0).unwrap_err();
        assert_eq!((e.stage, e.exit_code()), (Stage::Invariants, 2));
        assert!(e.to_string().contains("vertex (3,0)"));
        let e = analyze("z1 + z2 + z3", 0).unwrap_err();
        assert_eq!(e.stage, Stage::Newton);
    }

    #[test]
    fn lkn_routes() {
        let r = lkn("z1^3 + 0.5z1*zb1^2 - z2^3", 4096, 0).unwrap();
        assert_eq!((r.lkn.value, r.lkn.route), (3, "tracker"));
        let r = lkn("z1^5 + zb1*z2*(z1^2 - zb2^2) + zb2^5", 512, 0).unwrap();
        assert_eq!(r.lkn.value, 4);
        assert!(r.faces.is_some());
    }
}
