//! Plain-text sequence format.
//!
//! ```text
//! # comment
//! target <nx> <ny> <nz> <p/q>
//! pulse <nx> <ny> <nz> <p/q> <role> <channel> [frame <9 numbers>] [transported]
//! ```
//!
//! Angles are generator angles in units of π. Pulse axes are given in the
//! pulse frame; the frame rows are its x, y, z axes in lab coordinates.
//! Numbers are written so they parse back to the identical value.

use crate::error_models::FrameTriad;
use crate::scalar::Real;
use crate::sequences::{Channel, Gate, PiAngle, Pulse, PulseSequence, Role};
use crate::su2::Vec3;
use crate::{Error, Result};

struct Tokens<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    items.push((s, &text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            items.push((s, &text[s..]));
        }
        Tokens { line, items, pos: 0 }
    }

    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: column + 1, message: message.into() }
    }

    fn end_column(&self) -> usize {
        self.items.last().map(|(c, t)| c + t.len()).unwrap_or(0)
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied().ok_or_else(|| self.err(self.end_column(), format!("expected {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    fn peek(&self) -> Option<&'a str> {
        self.items.get(self.pos).map(|(_, t)| *t)
    }

    fn number<T: Real>(&mut self) -> Result<T> {
        let (col, tok) = self.next("number")?;
        T::parse_str(tok).ok_or_else(|| self.err(col, format!("not a number: `{tok}`")))
    }

    fn vec3<T: Real>(&mut self) -> Result<Vec3<T>> {
        Ok(Vec3::new(self.number()?, self.number()?, self.number()?))
    }

    fn angle(&mut self) -> Result<PiAngle> {
        let (col, tok) = self.next("angle p/q")?;
        PiAngle::parse(tok).ok_or_else(|| self.err(col, format!("not an angle: `{tok}`")))
    }

    fn finish(&self) -> Result<()> {
        match self.items.get(self.pos) {
            Some((col, tok)) => Err(self.err(*col, format!("unexpected `{tok}`"))),
            None => Ok(()),
        }
    }
}

pub fn parse<T: Real>(text: &str) -> Result<PulseSequence<T>> {
    let mut target: Option<Gate<T>> = None;
    let mut pulses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut t = Tokens::new(i + 1, content);
        let Some(&(col, head)) = t.items.first() else { continue };
        t.pos = 1;
        match head {
            "target" => {
                if target.is_some() {
                    return Err(t.err(col, "duplicate target line"));
                }
                let axis_col = t.items.get(1).map(|x| x.0).unwrap_or(col);
                let axis: Vec3<T> = t.vec3()?;
                axis.to_unit().map_err(|e| t.err(axis_col, e.to_string()))?;
                let alpha = t.angle()?;
                t.finish()?;
                target = Some(Gate::new(axis, alpha));
            }
            "pulse" => {
                if target.is_none() {
                    return Err(t.err(col, "pulse before target line"));
                }
                let axis_col = t.items.get(1).map(|x| x.0).unwrap_or(col);
                let axis: Vec3<T> = t.vec3()?;
                axis.to_unit().map_err(|e| t.err(axis_col, e.to_string()))?;
                let alpha = t.angle()?;
                let (rc, r) = t.next("role")?;
                let role = Role::parse(r).ok_or_else(|| t.err(rc, format!("unknown role `{r}`")))?;
                let (cc, c) = t.next("channel")?;
                let channel = Channel::parse(c).ok_or_else(|| t.err(cc, format!("unknown channel `{c}`")))?;
                let mut frame = FrameTriad::identity();
                if t.peek() == Some("frame") {
                    let fc = t.next("frame")?.0;
                    let rows = [t.vec3()?, t.vec3()?, t.vec3()?];
                    frame = FrameTriad::from_rows(rows).map_err(|e| t.err(fc, e.to_string()))?;
                }
                let mut transported = false;
                if t.peek() == Some("transported") {
                    t.pos += 1;
                    transported = true;
                }
                t.finish()?;
                pulses.push(Pulse { frame, axis, alpha, role, channel, transported });
            }
            other => return Err(t.err(col, format!("unknown directive `{other}`"))),
        }
    }
    let target = target.ok_or(Error::Parse { line: 1, column: 1, message: "missing target line".into() })?;
    Ok(PulseSequence::new(target, pulses))
}

pub fn serialize<T: Real>(seq: &PulseSequence<T>) -> String {
    let v = |v: &Vec3<T>| v.to_array().iter().map(Real::to_exact_string).collect::<Vec<_>>().join(" ");
    let mut out = format!("target {} {}\n", v(&seq.target.axis), seq.target.alpha);
    for p in &seq.pulses {
        out.push_str(&format!("pulse {} {} {} {}", v(&p.axis), p.alpha, p.role.as_str(), p.channel.as_str()));
        if !p.frame.is_identity() {
            out.push_str(&format!(" frame {} {} {}", v(&p.frame.x), v(&p.frame.y), v(&p.frame.z)));
        }
        if p.transported {
            out.push_str(" transported");
        }
        out.push('\n');
    }
    out
}
