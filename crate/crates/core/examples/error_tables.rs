//! Desk-scale error tables: trimmed vertical mean, numerical vs algebraic
//! trajectories, and c0 recovery from the algebraic solution.
use hypervfe::diagnostics::{error_tables, TablesConfig};
use hypervfe::Result;

fn main() -> Result<()> {
    let t = error_tables(&TablesConfig::desk())?;
    for c in &t.table1 {
        println!(
            "table 1  l={} M={} N/M={:<4} error = {:.4e}  ({:.1} s)",
            c.l, c.m, c.nodes_per_side, c.error, c.seconds
        );
    }
    for c in &t.table2 {
        println!(
            "table 2  l={} M={} N/M={:<4} error = {:.4e}  all nodes {:.3e}  ({:.1} s)",
            c.l, c.m, c.nodes_per_side, c.error, c.error_all_nodes, c.seconds
        );
    }
    for c in &t.table3 {
        println!("table 3  l={} q={:<5} error = {:.4e}", c.l, c.q, c.error);
    }
    Ok(())
}
