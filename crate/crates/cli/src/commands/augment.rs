use dms_core::augment::{compile_schema, read_csv, write_csv, MeasurementSchema, SymmetrySpec};
use serde_json::json;

use crate::io::{read_text, write_atomic, write_json_report, CliError, CmdResult};
use crate::AugmentArgs;

pub fn run(args: AugmentArgs) -> CmdResult {
    let ctx = SymmetrySpec::from_json(&read_text(&args.group)?)
        .and_then(|s| s.resolve())
        .map_err(|e| CliError::at(&args.group, e))?;
    let schema = MeasurementSchema::from_json(&read_text(&args.schema)?).map_err(|e| CliError::at(&args.schema, e))?;
    let plan = compile_schema(&schema, &ctx).map_err(|e| CliError::at(&args.schema, e))?;
    let file = std::fs::File::open(&args.input).map_err(|e| CliError::at(&args.input, e))?;
    let rows = read_csv(std::io::BufReader::new(file), &plan).map_err(|e| CliError::at(&args.input, e))?;
    let out = if args.orbit_average { plan.orbit_average(&rows)? } else { plan.augment_dataset(&rows)? };
    let mut buf = Vec::new();
    write_csv(&mut buf, &plan, &out)?;
    write_atomic(&args.out, &buf)?;
    let what = if args.orbit_average { "orbit-averaged" } else { "augmented" };
    println!("{what} {} rows to {} rows (group order {}, width {})", rows.nrows(), out.nrows(), plan.order(), plan.width());
    if args.json {
        let report = json!({
            "mode": what,
            "rows_in": rows.nrows(),
            "rows_out": out.nrows(),
            "group_order": plan.order(),
            "width": plan.width(),
        });
        write_json_report(&args.out, &report)?;
    }
    Ok(true)
}
