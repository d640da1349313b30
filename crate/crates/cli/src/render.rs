//! Report construction for every subcommand: canonical JSON (sorted keys,
//! byte-stable), a flat CSV view, and a human-readable text view.

use std::collections::BTreeMap;

use num::traits::{Signed, ToPrimitive, Zero};
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use xld_core::hodge::{append_blocks, assemble_diamond, smooth_primitive_hodge, xld_cohomology};
use xld_core::ih::{ih_oracle, ih_series, is_palindromic, is_unimodal_to_middle};
use xld_core::kvol::{
    beta_identity, delta_certificate, s_p, s_x_direct, s_x_transfer, vol_x, ValuationModel,
    ValuationReport,
};
use xld_core::lattice::{count_by_phi, enumerate, hilbert_crosscheck, LatticeCtx};
use xld_core::stability::{
    append_git_inequality, aut_group_data, family_polystable, t1_dim_oracle, t1_weights,
    torus_stability, WeightSupport, WeightSystem,
};
use xld_core::{Error, GradedMhs, HodgeDiamond};

use crate::DiamondRequest;

pub(crate) struct Report {
    pub json: String,
    pub csv: String,
    pub pretty: String,
}

fn to_json_line(value: &Value) -> String {
    serde_json::to_string(value).expect("serialization cannot fail")
}

fn big_u64(value: &BigInt, what: &str) -> Result<u64, Error> {
    value
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} does not fit in 64 bits")))
}

fn rat_str(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub(crate) fn diamond(request: DiamondRequest) -> Result<Report, Error> {
    let (gmhs, source): (GradedMhs, Value) = match request {
        DiamondRequest::Xld { l, d } => (
            xld_cohomology(l, d)?,
            json!({"xld": {"l": l, "d": d}}),
        ),
        DiamondRequest::Smooth { n, d } => {
            let mut g = GradedMhs::new(n);
            g.push(n, smooth_primitive_hodge(n, d)?)?;
            (g, json!({"smooth": {"n": n, "d": d}}))
        }
        DiamondRequest::Append { n, d, l } => {
            let mut g = GradedMhs::new(n);
            g.push(n, smooth_primitive_hodge(n, d)?)?;
            (
                append_blocks(&g, n, l, d)?,
                json!({"append": {"n": n, "d": d, "l": l}}),
            )
        }
    };
    let diamond = assemble_diamond(&gmhs)?;
    let rows = diamond.rows_by_degree();
    let json = to_json_line(&json!({
        "kind": "diamond",
        "dim": diamond.dim(),
        "rows": rows,
        "source": source,
    }));

    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let degree = 2 * diamond.dim() - i;
            vec![
                degree.to_string(),
                row.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            ]
        })
        .collect();
    let csv = csv_table(&["degree", "entries"], &csv_rows);

    Ok(Report {
        json,
        csv,
        pretty: pretty_diamond(&diamond),
    })
}

fn pretty_diamond(diamond: &HodgeDiamond) -> String {
    let rows = diamond.rows_by_degree();
    let width = rows
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    let rendered: Vec<String> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| format!("{v:>width$}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let max_len = rendered.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut out = String::new();
    for line in rendered {
        let pad = (max_len - line.len()) / 2;
        out.push_str(&" ".repeat(pad));
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub(crate) fn ih(l: usize, d: usize) -> Result<Report, Error> {
    let series = ih_series(l, d)?;
    let oracle = ih_oracle(l, d)?;
    if series != oracle {
        return Err(Error::OracleMismatch(format!(
            "intersection Betti routes disagree for ({l}, {d}): {:?} vs {:?}",
            series.coeffs(),
            oracle.coeffs()
        )));
    }
    let coefficients = series
        .coeffs()
        .iter()
        .map(|c| big_u64(c, "Betti number"))
        .collect::<Result<Vec<_>, _>>()?;
    let degree = l * d - 2;
    let palindromic = is_palindromic(&series, degree);
    let unimodal = is_unimodal_to_middle(&series);
    let json = to_json_line(&json!({
        "kind": "ih",
        "l": l,
        "d": d,
        "degree": degree,
        "coefficients": coefficients,
        "palindromic": palindromic,
        "unimodal_to_middle": unimodal,
        "oracle_match": true,
    }));
    let csv = csv_table(
        &["i", "dim_ih_2i"],
        &coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| vec![i.to_string(), c.to_string()])
            .collect::<Vec<_>>(),
    );
    let pretty = format!(
        "intersection Betti series for l = {l}, d = {d}\n\
         coefficients (dim IH^0, IH^2, ...): {coefficients:?}\n\
         palindromic of degree {degree}: {palindromic}\n\
         unimodal to the middle: {unimodal}\n\
         independent route: match\n"
    );
    Ok(Report { json, csv, pretty })
}

pub(crate) fn lattice_degree(ctx: LatticeCtx, k: i64, points: bool) -> Result<Report, Error> {
    let pts = enumerate(ctx, k)?;
    let mut histogram: BTreeMap<i64, u64> = BTreeMap::new();
    for p in &pts {
        *histogram.entry(p.phi()).or_insert(0) += 1;
    }
    let hilbert = if ctx.l() >= 2 {
        let check = hilbert_crosscheck(ctx, k)?;
        json!({
            "lhs": big_u64(&check.lhs, "Hilbert value")?,
            "rhs": big_u64(&check.rhs, "Hilbert value")?,
            "ok": check.ok(),
        })
    } else {
        Value::Null
    };
    let histogram_rows: Vec<(i64, u64)> = histogram.iter().map(|(&m, &c)| (m, c)).collect();
    let summary = json!({
        "kind": "lattice",
        "l": ctx.l(),
        "d": ctx.d(),
        "degree": k,
        "count": pts.len(),
        "phi_histogram": histogram_rows.iter().map(|&(m, c)| json!([m, c])).collect::<Vec<_>>(),
        "hilbert": hilbert,
    });
    let mut json_text = String::new();
    if points {
        for p in &pts {
            let rows: Vec<Vec<i64>> = p.rows().map(|r| r.to_vec()).collect();
            json_text.push_str(&to_json_line(&json!({
                "deg": p.deg(),
                "phi": p.phi(),
                "rep": rows,
            })));
            json_text.push('\n');
        }
    }
    json_text.push_str(&to_json_line(&summary));

    let csv = csv_table(
        &["phi", "count"],
        &histogram_rows
            .iter()
            .map(|(m, c)| vec![m.to_string(), c.to_string()])
            .collect::<Vec<_>>(),
    );
    let mut pretty = format!(
        "cone points of degree {k} for l = {}, d = {}: {}\nphi histogram:\n",
        ctx.l(),
        ctx.d(),
        pts.len()
    );
    for (m, c) in &histogram_rows {
        pretty.push_str(&format!("  phi = {m}: {c}\n"));
    }
    if ctx.l() >= 2 {
        let check = hilbert_crosscheck(ctx, k)?;
        pretty.push_str(&format!(
            "Hilbert cross-check: {} = {} -> {}\n",
            check.lhs,
            check.rhs,
            if check.ok() { "ok" } else { "MISMATCH" }
        ));
    }
    Ok(Report {
        json: json_text,
        csv,
        pretty,
    })
}

pub(crate) fn lattice_count_by_phi(ctx: LatticeCtx, n: i64) -> Result<Report, Error> {
    let counts = count_by_phi(ctx, n)?;
    let (l, d) = (ctx.l() as i64, ctx.d() as i64);
    let degree = n * d * (l - 1);
    // leading term d^{ld-1} (N(l-1) - m)^{l(d-1)-1} / (l(d-1)-1)!
    let exponent = (l * (d - 1) - 1) as u32;
    let lead_num = num::pow::pow(BigInt::from(d), (l * d - 1) as usize);
    let lead_den = xld_core::factorial(exponent as u64);
    let mut rows = Vec::new();
    for (m, count) in counts.iter().enumerate() {
        let arg = BigInt::from(n * (l - 1) - m as i64);
        let main = BigRational::new(
            &lead_num * num::pow::pow(arg, exponent as usize),
            lead_den.clone(),
        );
        let residual = BigRational::from_integer(count.clone()) - main;
        rows.push((m, count.clone(), residual));
    }
    let json = to_json_line(&json!({
        "kind": "lattice-count",
        "l": ctx.l(),
        "d": ctx.d(),
        "n": n,
        "degree": degree,
        "counts": counts.iter().map(|c| big_u64(c, "point count")).collect::<Result<Vec<_>, _>>()?,
        "residuals": rows.iter().map(|(_, _, r)| rat_str(r)).collect::<Vec<_>>(),
    }));
    let csv = csv_table(
        &["m", "count", "residual"],
        &rows
            .iter()
            .map(|(m, c, r)| vec![m.to_string(), c.to_string(), rat_str(r)])
            .collect::<Vec<_>>(),
    );
    let mut pretty = format!(
        "phi-graded point counts at degree {degree} (l = {}, d = {}, N = {n})\n",
        ctx.l(),
        ctx.d()
    );
    for (m, c, r) in &rows {
        pretty.push_str(&format!("  m = {m}: {c} (residual {})\n", rat_str(r)));
    }
    Ok(Report { json, csv, pretty })
}

pub(crate) fn stability_t1(ctx: LatticeCtx) -> Result<Report, Error> {
    let (l, d) = (ctx.l(), ctx.d());
    let weights = t1_weights(ctx)?;
    let oracle = t1_dim_oracle(l, d)?;
    if weights.len() as u64 != oracle {
        return Err(Error::OracleMismatch(format!(
            "deformation weight count {} disagrees with the dimension count {oracle}",
            weights.len()
        )));
    }
    let mut family = Vec::new();
    for t in 1..l {
        let verdict = family_polystable(l, d, t)?;
        family.push(json!({
            "t": t,
            "support_size": verdict.support_size,
            "polystable": verdict.polystable,
            "empty_support": verdict.empty_support,
        }));
    }
    let json = to_json_line(&json!({
        "kind": "t1",
        "l": l,
        "d": d,
        "phi_size": weights.len(),
        "oracle_dim": oracle,
        "match": true,
        "family": family,
    }));
    let mut csv_rows = vec![vec![
        "phi_size".to_string(),
        weights.len().to_string(),
    ]];
    csv_rows.push(vec!["oracle_dim".to_string(), oracle.to_string()]);
    for t in 1..l {
        let verdict = family_polystable(l, d, t)?;
        csv_rows.push(vec![
            format!("family_t_{t}"),
            verdict.polystable.to_string(),
        ]);
    }
    let csv = csv_table(&["key", "value"], &csv_rows);
    let mut pretty = format!(
        "first-order deformation weights for l = {l}, d = {d}: {} (independent count {oracle}, match)\n",
        weights.len()
    );
    for t in 1..l {
        let verdict = family_polystable(l, d, t)?;
        pretty.push_str(&format!(
            "  {t} generic block(s): support {}{} -> polystable: {}\n",
            verdict.support_size,
            if verdict.empty_support {
                " (empty, zero vector)"
            } else {
                ""
            },
            verdict.polystable
        ));
    }
    Ok(Report { json, csv, pretty })
}

pub(crate) fn stability_family(l: usize, d: usize, t: usize) -> Result<Report, Error> {
    let verdict = family_polystable(l, d, t)?;
    let json = to_json_line(&json!({
        "kind": "family",
        "l": l,
        "d": d,
        "t": verdict.t,
        "support_size": verdict.support_size,
        "empty_support": verdict.empty_support,
        "polystable": verdict.polystable,
    }));
    let csv = csv_table(
        &["key", "value"],
        &[
            vec!["support_size".into(), verdict.support_size.to_string()],
            vec!["empty_support".into(), verdict.empty_support.to_string()],
            vec!["polystable".into(), verdict.polystable.to_string()],
        ],
    );
    let pretty = format!(
        "family with {t} generic block(s) on l = {l}, d = {d}: support {}{}, polystable: {}\n",
        verdict.support_size,
        if verdict.empty_support {
            " (empty: zero tangent vector, polystable by convention)"
        } else {
            ""
        },
        verdict.polystable
    );
    Ok(Report { json, csv, pretty })
}

pub(crate) fn stability_polystable(vectors: Vec<Vec<i64>>) -> Result<Report, Error> {
    let support = WeightSupport::from_vectors(vectors.clone())?;
    let verdict = torus_stability(&support)?;
    let json = to_json_line(&json!({
        "kind": "polystable",
        "vectors": vectors,
        "polystable": verdict.polystable,
        "semistable": verdict.semistable,
        "empty_support": verdict.empty_support,
        "certificate": verdict.certificate.as_ref().map(rat_str),
    }));
    let csv = csv_table(
        &["key", "value"],
        &[
            vec!["polystable".into(), verdict.polystable.to_string()],
            vec!["semistable".into(), verdict.semistable.to_string()],
        ],
    );
    let pretty = format!(
        "support of {} vector(s): polystable {}, semistable {}{}\n",
        vectors.len(),
        verdict.polystable,
        verdict.semistable,
        verdict
            .certificate
            .as_ref()
            .map(|c| format!(", certificate {}", rat_str(c)))
            .unwrap_or_default()
    );
    Ok(Report { json, csv, pretty })
}

pub(crate) fn stability_git(trials: u64, seed: u64) -> Result<Report, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut tight_count = 0u64;
    let mut iff_ok = true;
    for trial in 0..trials {
        let d = rng.gen_range(2..=6usize);
        let m = rng.gen_range(0..=5usize);
        let mut w: Vec<BigRational> = (0..d).map(|_| random_rational(&mut rng)).collect();
        let v: Vec<BigRational> = (0..m + 2).map(|_| random_rational(&mut rng)).collect();
        if trial % 10 == 0 {
            // engineer tightness: force sum w = (d/(m+2)) sum v
            let sv: BigRational = v.iter().fold(BigRational::zero(), |a, x| a + x);
            let target = BigRational::new(BigInt::from(d as u64), BigInt::from((m + 2) as u64)) * sv;
            let partial: BigRational = w[..d - 1].iter().fold(BigRational::zero(), |a, x| a + x);
            w[d - 1] = target - partial;
        }
        let check = append_git_inequality(&WeightSystem(w), &WeightSystem(v), m, d)?;
        if !check.holds {
            violations += 1;
        }
        if check.tight {
            tight_count += 1;
        }
        if check.tight != check.tight_condition {
            iff_ok = false;
        }
    }
    let json = to_json_line(&json!({
        "kind": "git",
        "trials": trials,
        "seed": seed,
        "violations": violations,
        "tight_count": tight_count,
        "tightness_iff": iff_ok,
    }));
    let csv = csv_table(
        &["key", "value"],
        &[
            vec!["trials".into(), trials.to_string()],
            vec!["violations".into(), violations.to_string()],
            vec!["tight_count".into(), tight_count.to_string()],
            vec!["tightness_iff".into(), iff_ok.to_string()],
        ],
    );
    let pretty = format!(
        "appending inequality on {trials} random weight systems (seed {seed}):\n  violations: {violations}\n  tight cases: {tight_count}\n  tight exactly when sum w = (d/(m+2)) sum v: {iff_ok}\n"
    );
    Ok(Report { json, csv, pretty })
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-20..=20i64);
    let den = rng.gen_range(1..=9i64);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn stability_aut(l: usize, d: usize) -> Result<Report, Error> {
    let data = aut_group_data(l, d)?;
    let json = to_json_line(&json!({
        "kind": "aut",
        "l": l,
        "d": d,
        "finite_order": data.finite_order.to_string(),
        "torus_rank": data.torus_rank,
    }));
    let csv = csv_table(
        &["key", "value"],
        &[
            vec!["finite_order".into(), data.finite_order.to_string()],
            vec!["torus_rank".into(), data.torus_rank.to_string()],
        ],
    );
    let pretty = format!(
        "automorphisms for l = {l}, d = {d}: finite part of order {}, torus of rank {}\n",
        data.finite_order, data.torus_rank
    );
    Ok(Report { json, csv, pretty })
}

pub(crate) fn kvol_beta(lmax: usize, dmax: usize) -> Result<Report, Error> {
    let mut rows = Vec::new();
    let mut all_ok = true;
    for l in 2..=lmax {
        for d in 2..=dmax {
            let ok = beta_identity(l, d)?;
            all_ok &= ok;
            rows.push((l, d, ok));
        }
    }
    let json = to_json_line(&json!({
        "kind": "beta",
        "lmax": lmax,
        "dmax": dmax,
        "rows": rows.iter().map(|&(l, d, ok)| json!({"l": l, "d": d, "ok": ok})).collect::<Vec<_>>(),
        "all_ok": all_ok,
    }));
    let csv = csv_table(
        &["l", "d", "ok"],
        &rows
            .iter()
            .map(|(l, d, ok)| vec![l.to_string(), d.to_string(), ok.to_string()])
            .collect::<Vec<_>>(),
    );
    let pretty = format!(
        "beta-integral identity on 2..={lmax} x 2..={dmax}: {}\n",
        if all_ok { "all hold" } else { "FAILURES PRESENT" }
    );
    Ok(Report { json, csv, pretty })
}

pub(crate) fn kvol_volume(
    l: usize,
    d: usize,
    model: ValuationModel,
    alpha: BigRational,
) -> Result<Report, Error> {
    if alpha.is_negative() {
        return Err(Error::InvalidParameter("alpha must be >= 0".into()));
    }
    let value = vol_x(l, d, &model, &alpha)?;
    let json = to_json_line(&json!({
        "kind": "volume",
        "l": l,
        "d": d,
        "model": model.kind().name(),
        "alpha": rat_str(&alpha),
        "value": rat_str(&value),
        "value_float": rat_f64(&value),
    }));
    let csv = csv_table(
        &["key", "value"],
        &[
            vec!["alpha".into(), rat_str(&alpha)],
            vec!["value".into(), rat_str(&value)],
        ],
    );
    let pretty = format!(
        "vol(-K; v >= {}) for l = {l}, d = {d}, model {}: {} (~{})\n",
        rat_str(&alpha),
        model.kind().name(),
        rat_str(&value),
        rat_f64(&value)
    );
    Ok(Report { json, csv, pretty })
}

pub(crate) fn kvol_svalue(l: usize, d: usize, model: ValuationModel) -> Result<Report, Error> {
    let direct = s_x_direct(l, d, &model)?;
    let transfer = s_x_transfer(l, d, &model)?;
    if direct != transfer {
        return Err(Error::OracleMismatch(format!(
            "S-invariant routes disagree: direct {} vs transfer {}",
            rat_str(&direct),
            rat_str(&transfer)
        )));
    }
    let a = model.log_discrepancy()?;
    let s_base = s_p(&model)?;
    let ratio = &a / &direct;
    let bound = BigRational::new(BigInt::from((l * d - 1) as u64), BigInt::from((l - 1) as u64));
    let certified = ratio >= bound && ratio > BigRational::from_integer(BigInt::from(1));
    let json = to_json_line(&json!({
        "kind": "s-invariant",
        "l": l,
        "d": d,
        "model": model.kind().name(),
        "log_discrepancy": rat_str(&a),
        "s_base": rat_str(&s_base),
        "s_direct": rat_str(&direct),
        "s_transfer": rat_str(&transfer),
        "routes_equal": true,
        "ratio": rat_str(&ratio),
        "bound": rat_str(&bound),
        "certified": certified,
    }));
    let csv = csv_table(
        &["key", "value"],
        &[
            vec!["s_direct".into(), rat_str(&direct)],
            vec!["s_transfer".into(), rat_str(&transfer)],
            vec!["ratio".into(), rat_str(&ratio)],
            vec!["bound".into(), rat_str(&bound)],
        ],
    );
    let pretty = format!(
        "S-invariant for l = {l}, d = {d}, model {}:\n  direct route:   {}\n  transfer route: {}\n  A = {}, A/S = {} >= bound {} -> certified: {certified}\n",
        model.kind().name(),
        rat_str(&direct),
        rat_str(&transfer),
        rat_str(&a),
        rat_str(&ratio),
        rat_str(&bound)
    );
    Ok(Report { json, csv, pretty })
}

fn report_row(report: &ValuationReport) -> Value {
    json!({
        "model": report.model.map(|k| k.name()),
        "log_discrepancy": report.log_discrepancy.as_ref().map(rat_str),
        "s_base": report.s_base.as_ref().map(rat_str),
        "s_value": report.s_value.as_ref().map(rat_str),
        "ratio": report.ratio.as_ref().map(rat_str),
        "certified": report.certified,
    })
}

pub(crate) fn kvol_delta(l: usize, d: usize) -> Result<Report, Error> {
    let models = if l >= 3 {
        ValuationModel::witnesses(l)?
    } else {
        Vec::new()
    };
    let reports = delta_certificate(l, d, &models)?;
    let bound = reports
        .first()
        .map(|r| r.bound.clone())
        .expect("at least one report");
    let json = to_json_line(&json!({
        "kind": "delta",
        "l": l,
        "d": d,
        "bound": rat_str(&bound),
        "reports": reports.iter().map(report_row).collect::<Vec<_>>(),
        "all_certified": reports.iter().all(|r| r.certified),
    }));
    let csv = csv_table(
        &["model", "ratio", "certified"],
        &reports
            .iter()
            .map(|r| {
                vec![
                    r.model.map(|k| k.name().to_string()).unwrap_or_else(|| "bound-only".into()),
                    r.ratio.as_ref().map(rat_str).unwrap_or_default(),
                    r.certified.to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let mut pretty = format!(
        "A/S certificates for l = {l}, d = {d} (bound {}):\n",
        rat_str(&bound)
    );
    for r in &reports {
        match (&r.model, &r.ratio) {
            (Some(kind), Some(ratio)) => pretty.push_str(&format!(
                "  {}: A/S = {} -> certified: {}\n",
                kind.name(),
                rat_str(ratio),
                r.certified
            )),
            _ => pretty.push_str(&format!(
                "  zero-dimensional base: structural bound {} > 1 -> certified: {}\n",
                rat_str(&r.bound),
                r.certified
            )),
        }
    }
    Ok(Report { json, csv, pretty })
}

pub(crate) fn golden_report(names: &[&str], blessed: bool) -> Report {
    let json = to_json_line(&json!({
        "kind": "golden",
        "blessed": blessed,
        "cases": names,
    }));
    let csv = csv_table(
        &["case"],
        &names.iter().map(|n| vec![n.to_string()]).collect::<Vec<_>>(),
    );
    let pretty = format!(
        "{} {} golden case(s)\n",
        if blessed { "regenerated" } else { "verified" },
        names.len()
    );
    Report { json, csv, pretty }
}
