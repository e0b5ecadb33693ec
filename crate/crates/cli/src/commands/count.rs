use dms_core::basis::burnside_rank;
use serde_json::json;

use super::load_rep_pair;
use crate::io::CmdResult;
use crate::CountArgs;

pub fn run(args: CountArgs) -> CmdResult {
    let (group, rep_in, rep_out) = load_rep_pair(&args.rep_in, &args.rep_out)?;
    let r = burnside_rank(&rep_in, &rep_out)?;
    let mn = rep_in.dim() * rep_out.dim();
    let ratio = r as f64 / mn as f64;
    if args.json {
        println!("{}", json!({"r": r, "mn": mn, "ratio": ratio, "group_order": group.order()}));
    } else {
        println!("r={r} mn={mn} ratio={ratio:?}");
    }
    Ok(true)
}
