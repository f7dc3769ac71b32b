//! Plain-text rendering of reports for `--pretty`.

use std::fmt::Write;

use crate::report::*;

fn c(z: &Complex) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn pts(p: &[Complex]) -> String {
    p.iter().map(c).collect::<Vec<_>>().join(", ")
}

fn verdict(v: &VerdictOut) -> String {
    let mut s = v.kind.to_string();
    if let Some(p) = &v.point {
        let _ = write!(s, " at ({})", pts(p));
    }
    if let Some(a) = &v.alpha {
        let _ = write!(s, ", alpha = {}", c(a));
    }
    if let Some(r) = v.residual {
        let _ = write!(s, ", residual = {r:.2e}");
    }
    if let Some(f) = &v.f_value {
        let _ = write!(s, ", f = {}", c(f));
    }
    if let Some(b) = v.best {
        let _ = write!(s, " (best {b:.3e}");
        if let Some(n) = v.boundary_minima.filter(|&n| n > 0) {
            let _ = write!(s, ", {n} minima on the boundary");
        }
        s.push(')');
    }
    if let Some(m) = &v.message {
        let _ = write!(s, ": {m}");
    }
    s
}

fn newton_out(s: &mut String, b: &NewtonOut) {
    let verts: Vec<String> = b.vertices.iter().map(|v| format!("{:?}{}", v.point, if v.simple { "" } else { "*" })).collect();
    let _ = writeln!(s, "vertices: {}", verts.join(" "));
    for e in &b.edges {
        let _ = writeln!(s, "edge {}: weight {:?}, d = {}, f_P = {}", e.name, e.weight, e.d_value, e.face_function);
    }
    let _ = writeln!(s, "convenient: {}, simple vertices: {}", b.convenient, b.simple_vertices);
}

fn face_verdicts(s: &mut String, faces: &[FaceVerdictOut]) {
    for f in faces {
        let _ = writeln!(s, "  z{:?} P = {:?} (dim {}): {}", f.vars, f.weight, f.dim, verdict(&f.verdict));
        if let Some(z) = &f.zero_set {
            let _ = writeln!(s, "    zero set: {}", verdict(z));
        }
    }
}

fn fan_out(s: &mut String, f: &FanOut) {
    let _ = writeln!(s, "fan: {:?}", f.vertices);
    let m: Vec<String> = f.multiplicities.iter().map(|m| m.map_or("-".into(), |x| x.to_string())).collect();
    let _ = writeln!(s, "multiplicities: [{}]", m.join(", "));
    let _ = writeln!(s, "transitions: {:?}", f.transitions);
}

fn invariants_out(s: &mut String, i: &InvariantsOut) {
    for f in &i.faces {
        let m = f.polar_degree.map_or("-".into(), |m| m.to_string());
        let _ = writeln!(s, "face {}: m = {m}, r* = {} ({})", f.name, f.r_star.value, f.r_star.route);
    }
    let _ = writeln!(s, "lkn = {} ({})", i.lkn.value, i.lkn.route);
    let _ = writeln!(s, "chi(F*) = {}, chi(F) = {}", i.chi_f_star.value, i.chi_f.value);
    let _ = writeln!(s, "mu = {}", i.mu.value);
    let _ = writeln!(s, "zeta = {}", i.zeta.text);
    let _ = writeln!(s, "P1(t) = {}", i.char_poly.text);
    for w in &i.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
}

pub fn newton(r: &NewtonReport) -> String {
    let mut s = format!("f = {}\n", r.input.canonical);
    if let Some(b) = &r.boundary {
        newton_out(&mut s, b);
    }
    if let Some(f) = &r.face {
        let pts: Vec<String> = f.points.iter().map(|p| format!("{p:?}")).collect();
        let _ = writeln!(s, "face for P = {:?}: d = {}, dim {}, points {}", f.weight, f.d_value, f.dim, pts.join(" "));
        let _ = writeln!(s, "f_P = {}", f.face_function);
    }
    s
}

pub fn analyze(r: &AnalysisReport) -> String {
    let mut s = format!("f = {}\nseed = {}\n", r.input.canonical, r.seed);
    newton_out(&mut s, &r.newton);
    let _ = writeln!(s, "nondegenerate: {}", if r.nondegeneracy.clean { "no witness found" } else { "NO" });
    face_verdicts(&mut s, &r.nondegeneracy.faces);
    fan_out(&mut s, &r.fan);
    invariants_out(&mut s, &r.invariants);
    for w in &r.warnings {
        if !w.starts_with("invariants:") {
            let _ = writeln!(s, "warning: {w}");
        }
    }
    s
}

pub fn probe(r: &ProbeReport) -> String {
    let mut s = format!("f = {}\nmode = {}, seed = {}, starts = {}\n", r.input.canonical, r.mode, r.settings.seed, r.settings.starts);
    let _ = writeln!(s, "verdict: {}", r.verdict.as_ref().map_or("no faces".into(), verdict));
    face_verdicts(&mut s, &r.faces);
    if let Some(p) = &r.partial_faces {
        let _ = writeln!(s, "faces with zero weights:");
        face_verdicts(&mut s, p);
    }
    s
}

pub fn lkn(r: &LknReport) -> String {
    let mut s = format!("f = {}\nseed = {}, steps = {}\n", r.input.canonical, r.seed, r.steps);
    let _ = writeln!(s, "lkn = {} ({})", r.lkn.value, r.lkn.route);
    if let Some(t) = &r.tracker {
        let _ = writeln!(s, "roots at a = 0: {}", t.solutions_at_zero.len());
        let _ = writeln!(s, "permutation: {:?}, cycles {}, axes {}", t.permutation, t.cycles, t.axis_components);
        for f in &t.failures {
            let _ = writeln!(s, "retried: {f}");
        }
    }
    if let Some(faces) = &r.faces {
        for f in faces {
            let _ = writeln!(s, "face {}: r* = {} ({})", f.name, f.r_star.value, f.r_star.route);
        }
    }
    s
}

pub fn fan(r: &FanReport) -> String {
    let mut s = format!("f = {}\ndual rays: {:?}\n", r.input.canonical, r.fan.dual_rays);
    fan_out(&mut s, &r.fan);
    s
}

pub fn zeta(r: &ZetaReport) -> String {
    let mut s = format!("f = {}\n", r.input.canonical);
    let _ = writeln!(s, "zeta = {}", r.zeta.text);
    let _ = writeln!(s, "P1(t) = {}", r.char_poly.text);
    let _ = writeln!(s, "mu = {}, chi(F) = {}", r.mu.value, r.chi_f.value);
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}
