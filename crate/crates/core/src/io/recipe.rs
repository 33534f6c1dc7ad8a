//! Reduction recipes: one `kind cell [a] b` step per line, `#` comments.

use super::IoError;
use crate::reduce::Step;

pub fn parse_recipe(text: &str) -> Result<Vec<Step>, IoError> {
    let mut steps = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let column = content.len() - content.trim_start().len() + 1;
        let step = content.parse::<Step>().map_err(|message| IoError::Syntax {
            line: index + 1,
            column,
            message,
        })?;
        steps.push(step);
    }
    Ok(steps)
}

pub fn write_recipe(steps: &[Step]) -> String {
    steps.iter().map(|s| format!("{s}\n")).collect()
}
