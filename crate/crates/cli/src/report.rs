//! Text and JSON rendering of discovery and scoring results.

use relfd_core::info::ScoreBundle;
use relfd_core::search::DiscoveryResult;

fn set_display(names: &[String]) -> String {
    if names.is_empty() {
        String::from("{}")
    } else {
        format!("{{{}}}", names.join(", "))
    }
}

pub fn discovery_text(r: &DiscoveryResult, dropped_rows: usize) -> String {
    let mut out = String::new();
    out.push_str(&format!("method          {}\n", r.method));
    out.push_str(&format!("best set        {}\n", set_display(&r.best_set)));
    out.push_str(&format!("f0              {:.6}\n", r.f0));
    out.push_str(&format!("nodes explored  {}\n", r.nodes_explored));
    out.push_str(&format!("wall time (s)   {:.4}\n", r.wall_time));
    if r.terminated_early {
        out.push_str("terminated early: budget reached before the search finished\n");
    }
    if dropped_rows > 0 {
        out.push_str(&format!("dropped rows    {dropped_rows}\n"));
    }
    out
}

pub fn discovery_json(r: &DiscoveryResult, seed: u64, dropped_rows: usize) -> serde_json::Value {
    serde_json::json!({
        "method": r.method,
        "alpha": r.config.alpha,
        "bound": r.config.bound.name(),
        "best_set": r.best_set,
        "f0": r.f0,
        "nodes_explored": r.nodes_explored,
        "wall_time_s": r.wall_time,
        "terminated_early": r.terminated_early,
        "seed": seed,
        "dropped_rows": dropped_rows,
    })
}

pub fn score_text(
    columns: &[String],
    s: &ScoreBundle,
    f_mon: f64,
    f_spc: f64,
    dropped_rows: usize,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("columns    {}\n", set_display(columns)));
    out.push_str(&format!("H(Y)       {:.6}\n", s.h_y));
    out.push_str(&format!("I(X;Y)     {:.6}\n", s.mi));
    out.push_str(&format!("fraction   {:.6}\n", s.fraction));
    out.push_str(&format!("m0         {:.6}\n", s.m0));
    out.push_str(&format!("b0         {:.6}\n", s.b0));
    out.push_str(&format!("f0         {:.6}\n", s.f0));
    out.push_str(&format!("f_mon      {:.6}\n", f_mon));
    out.push_str(&format!("f_spc      {:.6}\n", f_spc));
    out.push_str(&format!("delta_gap  {:.6}\n", f_mon - f_spc));
    if dropped_rows > 0 {
        out.push_str(&format!("dropped rows {dropped_rows}\n"));
    }
    out
}

pub fn score_json(
    columns: &[String],
    s: &ScoreBundle,
    f_mon: f64,
    f_spc: f64,
    dropped_rows: usize,
) -> serde_json::Value {
    serde_json::json!({
        "columns": columns,
        "h_y": s.h_y,
        "mi": s.mi,
        "fraction": s.fraction,
        "m0": s.m0,
        "b0": s.b0,
        "f0": s.f0,
        "f_mon": f_mon,
        "f_spc": f_spc,
        "delta_gap": f_mon - f_spc,
        "dropped_rows": dropped_rows,
    })
}
