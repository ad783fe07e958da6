//! Reading graph, tensor and element files with file/line context on errors.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;
use skeinlab::graph::{GraphFile, RibbonGraph};
use skeinlab::skein::{expand_to_planar, trace_word_tensor, GammaTensor, SkeinElement, Word};

/// An input error, reported as `path:line:column: message` when a position is known.
#[derive(Debug)]
pub struct InputError {
    pub path: Option<PathBuf>,
    pub position: Option<(usize, usize)>,
    pub message: String,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            path: None,
            position: None,
            message: message.into(),
        }
    }

    pub fn at(path: &Path, message: impl Into<String>) -> Self {
        Self {
            path: Some(path.to_path_buf()),
            position: None,
            message: message.into(),
        }
    }

    fn json(path: &Path, e: serde_json::Error) -> Self {
        // serde_json reports line 0 for errors that are not tied to the text
        let position = (e.line() > 0).then(|| (e.line(), e.column()));
        let mut message = e.to_string();
        if let Some(cut) = message.rfind(" at line ") {
            message.truncate(cut);
        }
        Self {
            path: Some(path.to_path_buf()),
            position,
            message,
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.path {
            write!(f, "{}:", p.display())?;
            if let Some((line, col)) = self.position {
                write!(f, "{line}:{col}:")?;
            }
            f.write_str(" ")?;
        }
        f.write_str(&self.message)
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError::at(path, e.to_string()))
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::json(path, e))
}

pub fn load_graph(path: &Path) -> Result<RibbonGraph, InputError> {
    let file: GraphFile = parse(path, &read(path)?)?;
    RibbonGraph::new(file.vertices, file.edges, file.leaves).map_err(|e| InputError::at(path, e.to_string()))
}

/// A tensor argument: a JSON tensor file, or an inline trace word such as `x1*x2^-1`.
pub fn load_tensor(graph: &RibbonGraph, arg: &str) -> Result<GammaTensor, InputError> {
    let path = Path::new(arg);
    let tensor = if path.is_file() {
        parse(path, &read(path)?)?
    } else {
        let word: Word = arg
            .parse()
            .map_err(|_| InputError::new(format!("`{arg}` is neither a file nor a word like x1*x2^-1")))?;
        trace_word_tensor(graph, &word).map_err(|e| InputError::new(format!("{arg}: {e}")))?
    };
    tensor.to_diagram(graph).map_err(|e| InputError::at(path, e.to_string()))?;
    Ok(tensor)
}

/// An element argument: a skein element file (`{"terms": ...}`), a tensor file
/// (`{"arcs": ...}`, expanded first) or an inline trace word.
pub fn load_element(graph: &RibbonGraph, arg: &str) -> Result<SkeinElement, InputError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        let value: Value = parse(path, &text)?;
        if value.get("terms").is_some() {
            return parse(path, &text);
        }
        if value.get("arcs").is_none() {
            return Err(InputError::at(path, "expected a skein element (`terms`) or a tensor (`arcs`)"));
        }
    }
    let tensor = load_tensor(graph, arg)?;
    expand_to_planar(graph, &tensor).map_err(|e| InputError::new(format!("{arg}: {e}")))
}
