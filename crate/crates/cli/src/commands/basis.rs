use dms_core::basis::{compare_with_oracle, dense_nullspace_oracle, orbit_basis, OracleFile, DEFAULT_ORACLE_CAP};
use serde_json::json;

use super::load_rep_pair;
use crate::io::{sidecar, write_atomic, write_json_report, CmdResult};
use crate::BasisArgs;

pub fn run(args: BasisArgs) -> CmdResult {
    let (group, rep_in, rep_out) = load_rep_pair(&args.rep_in, &args.rep_out)?;
    let basis = orbit_basis(&rep_in, &rep_out)?;
    write_atomic(&args.out, basis.to_json().as_bytes())?;
    println!(
        "group order {}, {}x{} map: {} orbits, {} zero-forced",
        group.order(),
        basis.m,
        basis.n,
        basis.rank(),
        basis.zero_forced.len()
    );
    let mut report = json!({
        "group_order": group.order(),
        "m": basis.m,
        "n": basis.n,
        "rank": basis.rank(),
        "zero_forced": basis.zero_forced.len(),
        "basis_hash": basis.content_hash(),
    });
    let mut passed = true;
    if args.oracle {
        let q = dense_nullspace_oracle(&rep_in, &rep_out, args.tol, DEFAULT_ORACLE_CAP)?;
        write_atomic(&sidecar(&args.out, "oracle.json"), OracleFile::new(basis.m, basis.n, &q).to_json().as_bytes())?;
        let cmp = compare_with_oracle(&basis, &q);
        passed = cmp.agrees(args.tol);
        let rel = if cmp.orbit_rank == cmp.oracle_rank { "=" } else { "!=" };
        let cmp_op = if cmp.max_residual < args.tol { "<" } else { ">=" };
        println!(
            "rank {} {rel} {}, span residual {:.1e} {cmp_op} {:e}",
            cmp.orbit_rank, cmp.oracle_rank, cmp.max_residual, args.tol
        );
        report["oracle"] = json!({"comparison": cmp, "tol": args.tol, "agrees": passed});
    }
    if args.json {
        write_json_report(&args.out, &report)?;
    }
    Ok(passed)
}
