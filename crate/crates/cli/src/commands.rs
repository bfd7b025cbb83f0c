//! One function per subcommand, each filling a [`Report`].

use hypermag::bounds::{
    self, magnitude_upper_bound, mahler::mahler_pipeline_with_ts, small_t_slope_check,
    steiner_check, sudakov_pipeline_with, wills_check, SudakovOptions,
};
use hypermag::finite_metric::{check_positive_definite, FiniteMetricSpace};
use hypermag::intrinsic::{
    check_supermultiplicativity, ht_intrinsic_volumes, l1_intrinsic_volumes, normalize,
    IntrinsicConstants,
};
use hypermag::{
    build_space, grid_sample, magnitude, max_diversity, scale_space, ConvexBody, NormSpec, Zonotope,
};
use serde_json::json;

use crate::inputs::{norm_for, read_body, read_points, read_zonotope, MeasureSpec};
use crate::report::{to_value, Report, Table};
use crate::{BodyMeasureArgs, Cli, CliError, Command, SpaceArgs};

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Magnitude(_) => "magnitude",
        Command::Maxdiv { .. } => "maxdiv",
        Command::L1iv(_) => "l1iv",
        Command::Htiv(_) => "htiv",
        Command::Bound { .. } => "bound",
        Command::L1exact(_) => "l1exact",
        Command::Mahler { .. } => "mahler",
        Command::Sudakov { .. } => "sudakov",
        Command::Steiner { .. } => "steiner",
        Command::Wills(_) => "wills",
        Command::Smallt { .. } => "smallt",
    }
}

pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let mut r = Report::new(name(&cli.command), cli.workers);
    match &cli.command {
        Command::Magnitude(space) => {
            let s = load_space(space, &mut r)?;
            let pd = check_positive_definite(&s);
            let mag = magnitude(&s)?;
            r.tolerance("pivot_threshold", hypermag::finite_metric::PIVOT_THRESHOLD);
            r.outputs = json!({"magnitude": mag, "points": s.len(), "positive_definite": pd});
        }
        Command::Maxdiv {
            space,
            tol,
            max_iter,
        } => {
            let s = load_space(space, &mut r)?;
            r.input("max_iter", max_iter);
            r.tolerance("kkt", *tol);
            let w = max_diversity(&s, *tol, *max_iter)?;
            let mag = magnitude(&s).ok();
            r.outputs = json!({"diversity": w, "magnitude": mag, "points": s.len()});
        }
        Command::L1iv(a) => {
            let body = load_body(&a.body, &mut r)?;
            r.outputs = json!({"intrinsic_volumes": l1_intrinsic_volumes(&body)?});
        }
        Command::Htiv(a) => {
            let (body, measure) = load_body_measure(a, &mut r)?;
            let mu = ht_intrinsic_volumes(&body, &measure)?;
            let normalized = normalize(&mu, &IntrinsicConstants::new(body.dim()))?;
            let rows = check_supermultiplicativity(&mu);
            r.tolerance("supermultiplicativity_relative", 1e-9);
            r.outputs = json!({
                "intrinsic_volumes": mu,
                "normalized": normalized,
                "supermultiplicativity": rows,
            });
        }
        Command::Bound { args, ts } => {
            let (body, measure) = load_body_measure(args, &mut r)?;
            let report = magnitude_upper_bound(&body, &measure)?;
            let ts = ts.clone().unwrap_or_else(|| vec![1.0]);
            r.input("ts", &ts);
            let mut table = Table::new(&["t", "sum_bound", "exp_bound"]);
            let mut sweep = Vec::new();
            for &t in &ts {
                let (s, e) = (report.sum_bound_at_scale(t), report.exp_bound_at_scale(t));
                table.push(vec![json!(t), json!(s), json!(e)]);
                sweep.push(json!({"t": t, "sum_bound": s, "exp_bound": e}));
            }
            r.table = Some(table);
            r.outputs = json!({
                "sum_bound": report.sum_bound,
                "exp_bound": report.exp_bound,
                "mu_vector": report.mu_vector,
                "sweep": sweep,
            });
        }
        Command::L1exact(a) => {
            let body = load_body(&a.body, &mut r)?;
            r.outputs = json!({"magnitude": bounds::l1_magnitude_exact(&body)?});
        }
        Command::Mahler {
            generators,
            body,
            samples,
            ts,
        } => {
            let z = match (generators, body) {
                (Some(path), _) => read_zonotope(path)?,
                (None, Some(path)) => zonotope_of(read_body(path)?)?,
                (None, None) => {
                    return Err(CliError::Usage(
                        "mahler needs --generators or --body".into(),
                    ))
                }
            };
            r.input("generators", z.generators())
                .input("samples", samples);
            let ts = ts
                .clone()
                .unwrap_or_else(|| bounds::mahler::DEFAULT_TS.to_vec());
            r.input("ts", &ts).seed("seed", cli.seed);
            let rep = mahler_pipeline_with_ts(&z, *samples, cli.seed, cli.workers, &ts)?;
            r.caveat("vol_polar_std_err", rep.vol_polar.std_err)
                .caveat("product_std_err", rep.product_std_err);
            let mut table = Table::new(&["t", "lower", "upper", "upper_leading", "ok"]);
            for row in &rep.rows {
                table.push(vec![
                    json!(row.t),
                    json!(row.lower),
                    json!(row.upper),
                    json!(row.upper_leading),
                    json!(row.ok),
                ]);
            }
            r.table = Some(table);
            r.outputs = to_value(&rep);
        }
        Command::Sudakov {
            body,
            epsilon,
            grid_k,
            norm,
        } => {
            let body = load_body(body, &mut r)?;
            let opts = SudakovOptions {
                grid_k: *grid_k,
                norm: NormSpec::Lp(norm.map_or(2.0, |n| n.0)),
            };
            r.input("epsilon", epsilon)
                .input("grid_k", grid_k)
                .seed("seed", cli.seed);
            if let NormSpec::Lp(p) = opts.norm {
                r.input("lp", p);
            }
            r.tolerance("counting_bound_slack", 1e-9);
            let mut table = Table::new(&[
                "epsilon",
                "N",
                "t_star",
                "mag_lower",
                "counting_bound",
                "d_max",
                "v1_ratio",
                "ok",
            ]);
            let mut cells = Vec::new();
            for &eps in epsilon {
                let p = sudakov_pipeline_with(&body, eps, cli.seed, &opts)?;
                table.push(vec![
                    json!(eps),
                    json!(p.n),
                    json!(p.t_star),
                    json!(p.mag_lower),
                    json!(p.counting_bound),
                    json!(p.d_max),
                    json!(p.v1_ratio),
                    json!(p.ok),
                ]);
                cells.push(p);
            }
            r.table = Some(table);
            r.outputs = json!({"cells": cells});
        }
        Command::Steiner { body, ts } => {
            let body = load_body(body, &mut r)?;
            r.input("ts", ts);
            let rep = steiner_check(&body, ts)?;
            let mut table = Table::new(&["t", "minkowski", "polynomial", "abs_dev", "rel_dev"]);
            for row in &rep.rows {
                table.push(vec![
                    json!(row.t),
                    json!(row.minkowski),
                    json!(row.polynomial),
                    json!(row.abs_dev),
                    json!(row.rel_dev),
                ]);
            }
            r.table = Some(table);
            r.outputs = to_value(&rep);
        }
        Command::Wills(a) => {
            let body = load_body(&a.body, &mut r)?;
            r.tolerance("wills_slack", 1e-9);
            r.outputs = to_value(wills_check(&body)?);
        }
        Command::Smallt { args, ts, grid_k } => {
            let (body, measure) = load_body_measure(args, &mut r)?;
            let k = grid_k.unwrap_or(match body.dim() {
                0 | 1 => 257,
                2 => 24,
                _ => 8,
            });
            r.input("ts", ts).input("grid_k", k);
            r.tolerance("slope_slack", 1e-9);
            let rep = small_t_slope_check(&body, &measure, ts, k)?;
            let mut table = Table::new(&[
                "t",
                "grid_magnitude",
                "slope",
                "exact_slope",
                "bound",
                "ok",
                "finite_bound",
                "ok_finite",
            ]);
            for row in &rep.rows {
                table.push(vec![
                    json!(row.t),
                    json!(row.grid_magnitude),
                    json!(row.slope),
                    json!(row.exact_slope),
                    json!(rep.bound),
                    json!(row.ok),
                    json!(row.finite_bound),
                    json!(row.ok_finite),
                ]);
            }
            r.table = Some(table);
            r.outputs = to_value(&rep);
        }
    }
    Ok(r)
}

fn load_body(path: &std::path::Path, r: &mut Report) -> Result<ConvexBody, CliError> {
    let body = read_body(path)?;
    r.input("body", &body);
    Ok(body)
}

fn load_body_measure(
    a: &BodyMeasureArgs,
    r: &mut Report,
) -> Result<(ConvexBody, hypermag::GeneratingMeasure), CliError> {
    let body = load_body(&a.body, r)?;
    let measure = a.measure.resolve(body.dim())?;
    note_measure(r, &a.measure, &measure);
    Ok((body, measure))
}

fn note_measure(r: &mut Report, spec: &MeasureSpec, measure: &hypermag::GeneratingMeasure) {
    r.input("measure_spec", spec.to_string())
        .input("measure", measure);
    if let Some(s) = spec.seed() {
        r.seed("measure", s);
    }
    r.caveat(
        "measure_discretization_error",
        measure.discretization_error(),
    );
}

fn load_space(a: &SpaceArgs, r: &mut Report) -> Result<FiniteMetricSpace, CliError> {
    let space = if let Some(path) = &a.matrix {
        let rows: Vec<Vec<f64>> = crate::inputs::read_json(path)?;
        r.input("matrix", &rows);
        FiniteMetricSpace::from_matrix(&rows)?
    } else {
        let points = match (&a.points, &a.body) {
            (Some(path), _) => read_points(path)?,
            (None, Some(path)) => {
                let body = load_body(path, r)?;
                r.input("grid_k", a.grid_k);
                grid_sample(&body, a.grid_k)?
            }
            (None, None) => {
                return Err(CliError::Usage(
                    "one of --points, --matrix or --body is required".into(),
                ));
            }
        };
        let dim = points.first().map_or(0, |p| p.len());
        let (norm, desc) = norm_for(a.norm, a.measure.as_ref(), dim)?;
        if let (Some(spec), NormSpec::Measure(m)) = (&a.measure, &norm) {
            note_measure(r, spec, m);
        } else {
            r.input("norm", desc);
        }
        r.input("points", &points);
        build_space(&points, &norm)?
    };
    match a.scale {
        Some(t) => {
            r.input("scale", t);
            Ok(scale_space(&space, t)?)
        }
        None => Ok(space),
    }
}

fn zonotope_of(body: ConvexBody) -> Result<Zonotope, CliError> {
    match body {
        ConvexBody::Zonotope(z) => Ok(z),
        ConvexBody::AxisBox(b) => Ok(b.to_zonotope()),
        ConvexBody::VPolytope(_) => Err(CliError::Usage(
            "mahler needs a zonotope or box body, or --generators".into(),
        )),
    }
}
