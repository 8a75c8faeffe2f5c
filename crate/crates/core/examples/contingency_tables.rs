//! Three 2D contingency tables as bags over the triangle.

use bagcons::consistency::{encode_3dct, global_consistent, ContingencyTables, GlobalMode};

fn main() -> bagcons::Result<()> {
    let tables = [
        ("feasible", ContingencyTables::from_u64(&[vec![1, 1], vec![1, 1]], &[vec![1, 1], vec![1, 1]], &[vec![1, 1], vec![1, 1]])),
        ("infeasible", ContingencyTables::from_u64(&[vec![1, 0], vec![0, 1]], &[vec![0, 1], vec![1, 0]], &[vec![1, 0], vec![0, 1]])),
    ];
    for (name, t) in tables {
        let db = encode_3dct(&t)?;
        let report = global_consistent(&db, GlobalMode::Oracle);
        println!("{name}: pairwise {}, global {}", report.pairwise, report.global.name());
        if let Some(w) = report.witness {
            println!("{w}");
        }
    }
    Ok(())
}
