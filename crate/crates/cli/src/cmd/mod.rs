pub mod bounds;
pub mod fimcheck;
pub mod optimal;
pub mod region;
pub mod solve;
pub mod verify;

use crate::Failure;
use stealth_place::geometry::{Point, Scenario};

/// Parses `"x,y"` into a point.
pub fn parse_point(s: &str) -> Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected 'x,y', got '{s}'"));
    }
    let x = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let y = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok(Point::new(x, y))
}

/// Loads a scenario JSON file
/// (`{"targets": [[x,y],...], "sensors": [[x,y],...], "sigma": s}`).
pub fn load_scenario(path: &std::path::Path) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("bad scenario file {}: {e}", path.display())))
}

/// Loads the target list from either a bare `{"targets": ...}` document or
/// a full scenario file.
pub fn load_targets(path: &std::path::Path) -> Result<Vec<Point>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("bad targets file {}: {e}", path.display())))?;
    let raw = value
        .get("targets")
        .and_then(|t| t.as_array())
        .ok_or_else(|| Failure::usage(format!("{}: missing 'targets' array", path.display())))?;
    let mut targets = Vec::with_capacity(raw.len());
    for (i, entry) in raw.iter().enumerate() {
        let pair = entry
            .as_array()
            .filter(|a| a.len() == 2)
            .and_then(|a| Some((a[0].as_f64()?, a[1].as_f64()?)))
            .ok_or_else(|| Failure::usage(format!("target {i} is not an [x, y] pair")))?;
        targets.push(Point::new(pair.0, pair.1));
    }
    Ok(targets)
}
