use dms_core::net::{activation_variance_profile, fit_teacher, EquivNet, NetSpec, NetWeights};
use serde_json::json;

use crate::io::{read_text, resolve_group, write_atomic, write_json_report, CliError, CmdResult};
use crate::{DemoTrainArgs, InitStatsArgs, NetVerifyArgs};

pub fn init_stats(args: InitStatsArgs) -> CmdResult {
    let group = resolve_group(&args.group, None)?;
    let stds = activation_variance_profile(args.depth, args.width, &group, args.nonlinearity, args.init, args.batch, args.seed)?;
    let first = stds[0];
    let ratio = |s: f64| if first > 0.0 { s / first } else { f64::NAN };
    if let Some(out) = &args.out {
        let mut csv = String::from("layer,std,ratio\n");
        for (l, s) in stds.iter().enumerate() {
            csv.push_str(&format!("{l},{s},{}\n", ratio(*s)));
        }
        write_atomic(out, csv.as_bytes())?;
    }
    let last_ratio = ratio(*stds.last().expect("depth >= 1"));
    let report = json!({
        "group_order": group.order(),
        "depth": args.depth,
        "width": args.width,
        "stds": stds,
        "last_over_first": last_ratio,
    });
    match (&args.out, args.json) {
        (Some(out), true) => {
            write_json_report(out, &report)?;
        }
        (None, true) => {
            println!("{report}");
            return Ok(true);
        }
        _ => {}
    }
    println!("layer  std          ratio");
    for (l, s) in stds.iter().enumerate() {
        println!("{l:<6} {s:<12.6e} {:.4}", ratio(*s));
    }
    println!("std ratio last/first = {last_ratio:.4}");
    Ok(true)
}

fn build_from_spec(path: &std::path::Path) -> Result<(NetSpec, EquivNet), CliError> {
    let spec = NetSpec::from_json(&read_text(path)?).map_err(|e| CliError::at(path, e))?;
    let group = resolve_group(&spec.group, path.parent())?;
    let net = spec.build(&group).map_err(|e| CliError::at(path, e))?;
    Ok((spec, net))
}

pub fn verify(args: NetVerifyArgs) -> CmdResult {
    let (_, mut net) = build_from_spec(&args.spec)?;
    let weights = NetWeights::from_json(&read_text(&args.weights)?).map_err(|e| CliError::at(&args.weights, e))?;
    let differing: Vec<usize> = weights
        .layers
        .iter()
        .zip(net.layers())
        .enumerate()
        .filter(|(_, (w, l))| w.basis.as_ref().is_some_and(|b| b != l.basis()))
        .map(|(k, _)| k)
        .collect();
    weights.apply_to(&mut net).map_err(|e| CliError::at(&args.weights, e))?;
    let report = net.check_equivariance(args.samples, args.tol, args.seed);
    if args.json {
        println!("{}", json!({"report": report, "layers_with_foreign_basis": differing}));
        return Ok(report.passed());
    }
    for l in &differing {
        println!("note: layer {l} uses a stored basis that differs from the one computed for its representations");
    }
    let order = net.group().order();
    if report.passed() {
        println!(
            "max violation {:.1e} < {:e} over {} samples x {order} elements",
            report.max_violation, args.tol, args.samples
        );
    } else {
        let (g, s) = report.worst.expect("failing report has a worst case");
        println!("violation {:.3e} at g={g} (sample {s}) exceeds {:e}", report.max_violation, args.tol);
    }
    Ok(report.passed())
}

pub fn demo_train(args: DemoTrainArgs) -> CmdResult {
    let (spec, mut student) = build_from_spec(&args.spec)?;
    let group = student.group().clone();
    let teacher = NetSpec { seed: spec.seed.wrapping_add(1), ..spec.clone() }.build(&group)?;
    let losses = fit_teacher(&mut student, &teacher, args.samples, args.steps, args.lr, args.seed)?;
    write_atomic(&args.out, NetWeights::with_bases(&student).to_json().as_bytes())?;
    let eq = student.check_equivariance(16, args.tol, args.seed);
    let (first, last) = (losses[0], *losses.last().expect("at least one loss"));
    let passed = last < first && eq.passed();
    if args.json {
        write_json_report(&args.out, &json!({"losses": losses, "equivariance": eq}))?;
    }
    println!("loss {first:.4e} -> {last:.4e} over {} steps", args.steps);
    println!("max equivariance violation {:.1e}", eq.max_violation);
    Ok(passed)
}
