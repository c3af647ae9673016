//! Line-oriented text formats for frames, pointed models and witness sets,
//! and resolution of `builtin:NAME` references.
//!
//! A frame block:
//!
//! ```text
//! frame B
//! states 2
//! edge 0 1
//! ```
//!
//! A model adds `true <var> <state>...` lines and at most one `point <state>`.
//! A witness file has `positive:` and `negative:` sections listing frame
//! names or inline frame blocks. Blank lines and `#` comments are ignored.

use std::path::Path;

use crate::colouring::{cycle, k_complete, khat};
use crate::error::{Error, Result};
use crate::formula::Var;
use crate::gallery::{builtin_witnesses, WitnessSet};
use crate::kripke::{Frame, Model};

fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        line,
        msg: msg.into(),
    }
}

fn number(line: usize, word: Option<&str>, what: &str) -> Result<usize> {
    word.ok_or_else(|| format_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| format_err(line, format!("bad {what}")))
}

struct Pending {
    name: String,
    line: usize,
    states: Option<usize>,
    edges: Vec<(usize, usize, usize)>,
    truths: Vec<(usize, Var, usize)>,
    point: Option<(usize, usize)>,
}

impl Pending {
    fn new(name: &str, line: usize) -> Pending {
        Pending {
            name: name.to_string(),
            line,
            states: None,
            edges: vec![],
            truths: vec![],
            point: None,
        }
    }

    fn finish(self) -> Result<(Model, Option<usize>)> {
        let n = self
            .states
            .ok_or_else(|| format_err(self.line, format!("frame {} lacks `states`", self.name)))?;
        let mut f = Frame::new(n).named(self.name);
        for (line, u, v) in self.edges {
            if u >= n || v >= n {
                return Err(format_err(line, format!("edge {u} {v} out of range")));
            }
            f.add_edge(u, v);
        }
        let mut m = Model::empty(f);
        for (line, var, s) in self.truths {
            if s >= n {
                return Err(format_err(line, format!("state {s} out of range")));
            }
            m.set(var, s, true);
        }
        if let Some((line, p)) = self.point {
            if p >= n {
                return Err(format_err(line, format!("point {p} out of range")));
            }
        }
        Ok((m, self.point.map(|(_, p)| p)))
    }
}

/// One parsed item: a bare name or an inline block.
enum Item {
    Name(usize, String),
    Block(Pending),
}

struct Section {
    label: Option<String>,
    items: Vec<Item>,
}

fn scan(text: &str, allow_sections: bool, allow_valuation: bool) -> Result<Vec<Section>> {
    let mut sections = vec![Section {
        label: None,
        items: vec![],
    }];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if allow_sections && content.ends_with(':') && !content.contains(' ') {
            let label = content.trim_end_matches(':').to_string();
            sections.push(Section {
                label: Some(label),
                items: vec![],
            });
            continue;
        }
        let items = &mut sections.last_mut().expect("nonempty").items;
        let mut words = content.split_whitespace();
        let key = words.next().expect("nonempty line");
        let current = || format_err(line, format!("`{key}` outside a frame block"));
        match key {
            "frame" => {
                let name = words.next().unwrap_or("");
                items.push(Item::Block(Pending::new(name, line)));
            }
            "states" | "edge" | "true" | "point" => {
                let Some(Item::Block(p)) = items.last_mut() else {
                    return Err(current());
                };
                match key {
                    "states" => {
                        if p.states.is_some() {
                            return Err(format_err(line, "repeated `states`"));
                        }
                        let n = number(line, words.next(), "state count")?;
                        if n == 0 {
                            return Err(format_err(line, "a frame needs at least one state"));
                        }
                        p.states = Some(n);
                    }
                    "edge" => {
                        let u = number(line, words.next(), "edge source")?;
                        let v = number(line, words.next(), "edge target")?;
                        p.edges.push((line, u, v));
                    }
                    "true" if allow_valuation => {
                        let var = words
                            .next()
                            .and_then(|w| w.strip_prefix('p'))
                            .and_then(|d| d.parse::<u32>().ok())
                            .filter(|&d| (1..=64).contains(&d))
                            .ok_or_else(|| format_err(line, "expected a variable p1..p64"))?;
                        for w in words.by_ref() {
                            let s = number(line, Some(w), "state")?;
                            p.truths.push((line, Var::new(var), s));
                        }
                    }
                    "point" if allow_valuation => {
                        if p.point.is_some() {
                            return Err(format_err(line, "repeated `point`"));
                        }
                        p.point = Some((line, number(line, words.next(), "point")?));
                    }
                    _ => return Err(format_err(line, format!("`{key}` not allowed here"))),
                }
            }
            name if allow_sections => items.push(Item::Name(line, name.to_string())),
            other => return Err(format_err(line, format!("unknown directive `{other}`"))),
        }
        if words.next().is_some() {
            return Err(format_err(line, "trailing input"));
        }
    }
    Ok(sections)
}

/// Parses every frame block of a frame file.
pub fn parse_frames(text: &str) -> Result<Vec<Frame>> {
    let sections = scan(text, false, false)?;
    let mut out = Vec::new();
    for item in sections.into_iter().flat_map(|s| s.items) {
        if let Item::Block(p) = item {
            out.push(p.finish()?.0.frame);
        }
    }
    if out.is_empty() {
        return Err(format_err(1, "no frame block"));
    }
    Ok(out)
}

/// Parses a file holding exactly one frame.
pub fn parse_frame(text: &str) -> Result<Frame> {
    let mut frames = parse_frames(text)?;
    if frames.len() != 1 {
        return Err(format_err(
            1,
            format!("expected one frame, found {}", frames.len()),
        ));
    }
    Ok(frames.remove(0))
}

/// Parses a model file; the point is `None` when no `point` line is given.
pub fn parse_model(text: &str) -> Result<(Model, Option<usize>)> {
    let sections = scan(text, false, true)?;
    let mut blocks: Vec<Pending> = sections
        .into_iter()
        .flat_map(|s| s.items)
        .filter_map(|i| match i {
            Item::Block(p) => Some(p),
            Item::Name(..) => None,
        })
        .collect();
    if blocks.len() != 1 {
        return Err(format_err(
            1,
            format!("expected one model, found {}", blocks.len()),
        ));
    }
    blocks.remove(0).finish()
}

/// Built-in frames: `kN`, `khatN` and `cN`.
pub fn builtin_frame(name: &str) -> Result<Frame> {
    let size = |prefix: &str| {
        name.strip_prefix(prefix)
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&n| n >= 1)
    };
    if let Some(n) = size("khat") {
        return Ok(khat(n));
    }
    if let Some(n) = size("k") {
        return Ok(k_complete(n));
    }
    if let Some(n) = size("c") {
        return Ok(cycle(n));
    }
    Err(Error::Invalid(format!("unknown builtin frame `{name}`")))
}

/// Built-in witness sets: the gallery names plus `khatN`/`kN`, both naming
/// K̂ₙ against Kₙ.
pub fn builtin_witness_set(name: &str) -> Result<WitnessSet> {
    let size = |prefix: &str| {
        name.strip_prefix(prefix)
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&n| n >= 1)
    };
    if let Some(n) = size("khat").or_else(|| size("k")) {
        return Ok(WitnessSet::unchecked(
            format!("khat{n}"),
            vec![khat(n)],
            vec![k_complete(n)],
        ));
    }
    builtin_witnesses(name)
}

/// Parses a witness file. Bare names refer to earlier inline frames of the
/// same file or to built-in frames.
pub fn parse_witnesses(name: &str, text: &str) -> Result<WitnessSet> {
    let sections = scan(text, true, false)?;
    let mut defined: Vec<Frame> = Vec::new();
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for section in sections {
        let target = match section.label.as_deref() {
            None if section.items.is_empty() => continue,
            None => return Err(format_err(1, "frames before the first section")),
            Some("positive") => &mut positives,
            Some("negative") => &mut negatives,
            Some(other) => return Err(format_err(1, format!("unknown section `{other}:`"))),
        };
        for item in section.items {
            let frame = match item {
                Item::Block(p) => {
                    let f = p.finish()?.0.frame;
                    defined.push(f.clone());
                    f
                }
                Item::Name(line, n) => match defined.iter().find(|f| f.name == n) {
                    Some(f) => f.clone(),
                    None => builtin_frame(&n)
                        .map_err(|_| format_err(line, format!("unknown frame `{n}`")))?,
                },
            };
            target.push(frame);
        }
    }
    if positives.is_empty() || negatives.is_empty() {
        return Err(format_err(
            1,
            "a witness set needs positive and negative frames",
        ));
    }
    Ok(WitnessSet::unchecked(name, positives, negatives))
}

pub fn write_frame(f: &Frame) -> String {
    let mut s = format!("frame {}\nstates {}\n", f.name, f.state_count());
    for (u, v) in f.edges() {
        s.push_str(&format!("edge {u} {v}\n"));
    }
    s
}

pub fn write_model(m: &Model, point: Option<usize>) -> String {
    let mut s = write_frame(&m.frame);
    for bit in 0..64u32 {
        let var = Var::new(bit + 1);
        let states: Vec<String> = (0..m.state_count())
            .filter(|&st| m.holds(var, st))
            .map(|st| st.to_string())
            .collect();
        if !states.is_empty() {
            s.push_str(&format!("true {var} {}\n", states.join(" ")));
        }
    }
    if let Some(p) = point {
        s.push_str(&format!("point {p}\n"));
    }
    s
}

pub fn write_witnesses(w: &WitnessSet) -> String {
    let mut s = format!("# {}\npositive:\n", w.name);
    for f in &w.positives {
        s.push_str(&write_frame(f));
    }
    s.push_str("negative:\n");
    for f in &w.negatives {
        s.push_str(&write_frame(f));
    }
    s
}

fn read(path: &str) -> Result<String> {
    Ok(std::fs::read_to_string(Path::new(path))?)
}

/// A frame from `builtin:NAME` or a frame file.
pub fn load_frame(spec: &str) -> Result<Frame> {
    match spec.strip_prefix("builtin:") {
        Some(name) => builtin_frame(name),
        None => parse_frame(&read(spec)?),
    }
}

/// A witness set from `builtin:NAME` or a witness file.
pub fn load_witnesses(spec: &str) -> Result<WitnessSet> {
    match spec.strip_prefix("builtin:") {
        Some(name) => builtin_witness_set(name),
        None => {
            let stem = Path::new(spec)
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or(spec);
            parse_witnesses(stem, &read(spec)?)
        }
    }
}

pub fn load_model(path: &str) -> Result<(Model, Option<usize>)> {
    parse_model(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::transfer_witnesses;

    #[test]
    fn frame_round_trip() {
        let f = khat(3);
        let back = parse_frame(&write_frame(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn duplicate_edges_are_ignored() {
        let f = parse_frame("frame x\nstates 2\nedge 0 1\nedge 0 1 # again\n").unwrap();
        assert_eq!(f.edge_count(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_frame("frame x\nstates 2\nedge 0 5\n") {
            Err(Error::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_frame("edge 0 1\n").is_err());
        assert!(parse_frame("frame x\nstates 2\nwat\n").is_err());
    }

    #[test]
    fn model_round_trip() {
        let m = Model::from_labels(
            Frame::from_edges(3, [(0, 1), (1, 2)]).named("m"),
            vec![1, 3, 2],
        )
        .unwrap();
        let (back, point) = parse_model(&write_model(&m, Some(2))).unwrap();
        assert_eq!(back, m);
        assert_eq!(point, Some(2));
    }

    #[test]
    fn witness_files() {
        let w = parse_witnesses(
            "mine",
            "positive:\nframe r\nstates 1\nedge 0 0\nkhat2\nnegative:\nframe d\nstates 1\nr\n",
        )
        .unwrap();
        assert_eq!(w.positives.len(), 2);
        assert_eq!(w.negatives.len(), 2);
        assert_eq!(w.negatives[1].name, "r");
        let t = transfer_witnesses(2, 1).unwrap();
        let back = parse_witnesses("t", &write_witnesses(&t)).unwrap();
        assert_eq!(back.positives, t.positives);
        assert_eq!(back.negatives, t.negatives);
        assert!(parse_witnesses("x", "positive:\nnope\nnegative:\nk2\n").is_err());
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin_frame("khat3").unwrap().state_count(), 6);
        assert_eq!(builtin_frame("k4").unwrap().edge_count(), 12);
        assert_eq!(builtin_frame("c5").unwrap().edge_count(), 5);
        assert!(builtin_frame("q1").is_err());
        assert_eq!(
            builtin_witness_set("k3").unwrap().positives[0].name,
            "khat3"
        );
        assert_eq!(
            builtin_witness_set("transfer-0-1").unwrap().name,
            "transfer-0-1"
        );
    }
}
