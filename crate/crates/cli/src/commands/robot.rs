use dms_core::rigid::{identify_dms, load_candidates, load_robot, CheckStage};

use crate::io::{read_text, CliError, CmdResult};
use crate::RobotVerifyArgs;

pub fn verify(args: RobotVerifyArgs) -> CmdResult {
    if args.samples == 0 || !(args.tol > 0.0) {
        return Err(CliError::new("--samples must be at least 1 and --tol positive"));
    }
    let tree = load_robot(&read_text(&args.robot)?).map_err(|e| CliError::at(&args.robot, e))?;
    let candidates = load_candidates(&read_text(&args.candidates)?, &tree).map_err(|e| CliError::at(&args.candidates, e))?;
    let report = identify_dms(&tree, &candidates, args.samples, args.tol, args.seed)?;
    let all_verified = report.verdicts.iter().all(|v| v.verified);
    let group_ok = report.group_check.as_ref().is_none_or(|c| c.passed());
    let passed = all_verified && group_ok && report.group_check.is_some();
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(|e| CliError::new(e.to_string()))?);
        return Ok(passed);
    }

    for v in &report.verdicts {
        let mm = v.stages.iter().find(|s| s.stage == CheckStage::MassMatrix);
        let mm_text = mm
            .map(|s| {
                let at = s.worst_sample.map(|k| format!(" at sample {k}")).unwrap_or_default();
                format!("mass-matrix violation {:.1e}{at}", s.max_violation)
            })
            .unwrap_or_default();
        match &v.reason {
            None => println!("{}: verified on {} samples ({mm_text})", v.name, report.samples),
            Some(r) if r.starts_with("mass-matrix") => println!("{}: rejected: {r}", v.name),
            Some(r) => println!("{}: rejected: {r}; {mm_text}", v.name),
        }
    }
    match &report.group_check {
        Some(c) if c.passed() => println!("verified; group order {}", report.group_order),
        Some(c) => println!(
            "rejected: group of order {} fails mass-matrix equivariance ({:.1e}{})",
            report.group_order,
            c.max_violation,
            c.worst.map(|(g, s)| format!(" at element {g}, sample {s}")).unwrap_or_default()
        ),
        None => println!("rejected: no candidate verified"),
    }
    Ok(passed)
}
