//! Line-oriented schedule format.
//!
//! ```text
//! # comment
//! pulse q=1 lo=1 hi=3 phase=-1.5707963267948966e0 rabi=1.3823007675795088e10 t=1.1363636363636363e-10  # step 1a
//! wait t=1.1363636363636364e-9  # step 1b
//! ```
//!
//! Numbers are emitted with 17 significant digits, so `emit` after `parse`
//! reproduces canonical text byte for byte. A trailing comment of the form
//! `# step <n><a|b|c>` carries the segment's position in the program; any
//! other comment is ignored.

use std::fmt::Write as _;

use super::schedule::{Schedule, Segment, StepTag, SubOp};
use crate::dynamics::{PulseDrive, TransitionSelector};
use crate::hilbert::Qudit;
use crate::{Result, SimError};

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_schedule(schedule: &Schedule) -> String {
    let mut out = String::new();
    for seg in schedule.segments() {
        match seg.segment {
            Segment::Pulse(p) => write!(
                out,
                "pulse q={} lo={} hi={} phase={} rabi={} t={}",
                p.qudit.id(),
                p.transition.lower(),
                p.transition.upper(),
                fmt_f64(p.phase),
                fmt_f64(p.rabi),
                fmt_f64(p.duration)
            ),
            Segment::Wait { duration } => write!(out, "wait t={}", fmt_f64(duration)),
        }
        .expect("writing to a String cannot fail");
        if let Some(tag) = seg.tag {
            write!(out, "  # step {tag}").expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> SimError {
    SimError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_tag(comment: &str) -> Option<StepTag> {
    let rest = comment.trim().strip_prefix("step")?.trim();
    let mut chars = rest.chars();
    let step = chars.next()?.to_digit(10)?;
    let sub = SubOp::from_letter(chars.next()?)?;
    if chars.next().is_some() || !(1..=5).contains(&step) {
        return None;
    }
    Some(StepTag::new(step as u8, sub))
}

struct Fields<'a> {
    line: usize,
    items: Vec<(usize, &'a str, &'a str)>,
}

impl<'a> Fields<'a> {
    fn take(&mut self, key: &str, keyword_col: usize) -> Result<(usize, &'a str)> {
        let pos = self
            .items
            .iter()
            .position(|(_, k, _)| *k == key)
            .ok_or_else(|| parse_err(self.line, keyword_col, format!("missing `{key}=`")))?;
        let (col, _, v) = self.items.remove(pos);
        Ok((col, v))
    }

    fn float(&mut self, key: &str, keyword_col: usize) -> Result<(usize, f64)> {
        let (col, v) = self.take(key, keyword_col)?;
        let x: f64 = v
            .parse()
            .map_err(|_| parse_err(self.line, col, format!("`{key}` expects a number, got `{v}`")))?;
        if !x.is_finite() {
            return Err(parse_err(self.line, col, format!("`{key}` must be finite")));
        }
        Ok((col, x))
    }

    fn uint(&mut self, key: &str, keyword_col: usize) -> Result<(usize, usize)> {
        let (col, v) = self.take(key, keyword_col)?;
        let x = v
            .parse()
            .map_err(|_| parse_err(self.line, col, format!("`{key}` expects an integer, got `{v}`")))?;
        Ok((col, x))
    }

    fn finish(self) -> Result<()> {
        match self.items.first() {
            Some((col, k, _)) => Err(parse_err(self.line, *col, format!("unexpected key `{k}`"))),
            None => Ok(()),
        }
    }
}

pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let mut schedule = Schedule::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        let mut tokens = Vec::new();
        let mut offset = 0;
        for tok in body.split_whitespace() {
            let start = body[offset..].find(tok).expect("token comes from this line") + offset;
            offset = start + tok.len();
            tokens.push((start + 1, tok));
        }
        let Some(&(kw_col, keyword)) = tokens.first() else {
            continue;
        };

        let mut items = Vec::new();
        for &(col, tok) in &tokens[1..] {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| parse_err(line_no, col, format!("expected key=value, got `{tok}`")))?;
            if items.iter().any(|(_, seen, _)| *seen == k) {
                return Err(parse_err(line_no, col, format!("duplicate key `{k}`")));
            }
            items.push((col, k, v));
        }
        let mut fields = Fields { line: line_no, items };

        let segment = match keyword {
            "pulse" => {
                let (qcol, q) = fields.uint("q", kw_col)?;
                let qudit = Qudit::from_id(q).map_err(|e| parse_err(line_no, qcol, e.to_string()))?;
                let (lcol, lo) = fields.uint("lo", kw_col)?;
                let (_, hi) = fields.uint("hi", kw_col)?;
                let transition =
                    TransitionSelector::new(lo, hi).map_err(|e| parse_err(line_no, lcol, e.to_string()))?;
                let (_, phase) = fields.float("phase", kw_col)?;
                let (rcol, rabi) = fields.float("rabi", kw_col)?;
                let (tcol, t) = fields.float("t", kw_col)?;
                let drive = PulseDrive::new(qudit, transition, rabi, phase, t).map_err(|e| {
                    let col = if rabi > 0.0 { tcol } else { rcol };
                    parse_err(line_no, col, e.to_string())
                })?;
                Segment::Pulse(drive)
            }
            "wait" => {
                let (tcol, t) = fields.float("t", kw_col)?;
                if t < 0.0 {
                    return Err(parse_err(
                        line_no,
                        tcol,
                        format!("duration must be non-negative, got {t}"),
                    ));
                }
                Segment::Wait { duration: t }
            }
            other => {
                return Err(parse_err(
                    line_no,
                    kw_col,
                    format!("unknown segment `{other}`, expected `pulse` or `wait`"),
                ));
            }
        };
        fields.finish()?;
        schedule.push(segment, comment.and_then(parse_tag))?;
    }
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{compile_ccz_schedule, ProtocolConfig};
    use proptest::prelude::*;

    #[test]
    fn compiled_schedule_round_trips() {
        let sched = compile_ccz_schedule(&ProtocolConfig::reference());
        let text = emit_schedule(&sched);
        assert_eq!(text.lines().count(), 15);
        let parsed = parse_schedule(&text).unwrap();
        assert_eq!(parsed, sched);
        assert_eq!(emit_schedule(&parsed), text);
    }

    #[test]
    fn accepts_comments_and_loose_spacing() {
        let text = "# header\n\n   wait   t=1e-9   \npulse t=2.5E-10 q=3 hi=2 lo=1 rabi=6.28e9 phase=0.5 # free text\n";
        let s = parse_schedule(text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.segments()[0].segment, Segment::Wait { duration: 1e-9 });
        assert!(s.segments()[1].tag.is_none());
        match s.segments()[1].segment {
            Segment::Pulse(p) => {
                assert_eq!(p.qudit, Qudit::Three);
                assert_eq!((p.transition.lower(), p.transition.upper()), (1, 2));
                assert_eq!(p.duration, 2.5e-10);
            }
            _ => panic!("expected a pulse"),
        }
    }

    #[test]
    fn zero_length_segments_are_legal() {
        let s = parse_schedule("wait t=0\npulse q=1 lo=0 hi=2 phase=0 rabi=1 t=0\n").unwrap();
        assert_eq!(s.total_duration(), 0.0);
    }

    #[test]
    fn errors_carry_line_and_column() {
        let cases = [
            ("wait t=1e-9\nhop t=1", 2, 1),
            ("wait t=abc", 1, 6),
            ("wait t=-1e-9", 1, 6),
            ("  wait", 1, 3),
            ("pulse q=4 lo=0 hi=1 phase=0 rabi=1 t=1", 1, 7),
            ("pulse q=1 lo=2 hi=2 phase=0 rabi=1 t=1", 1, 11),
            ("wait t=1 t=2", 1, 10),
            ("wait t=1 extra=3", 1, 10),
            ("wait t=1 junk", 1, 10),
        ];
        for (text, line, column) in cases {
            match parse_schedule(text) {
                Err(SimError::Parse { line: l, column: c, .. }) => {
                    assert_eq!((l, c), (line, column), "{text}");
                }
                other => panic!("{text}: expected parse error, got {other:?}"),
            }
        }
    }

    fn arb_segment() -> impl Strategy<Value = Segment> {
        let pulse = (
            1usize..=3,
            0usize..4,
            1usize..4,
            -10.0f64..10.0,
            1e3f64..1e12,
            0.0f64..1e-6,
        )
            .prop_map(|(q, lo, shift, phase, rabi, t)| {
                let hi = (lo + shift) % 4;
                Segment::Pulse(
                    PulseDrive::new(
                        Qudit::from_id(q).unwrap(),
                        TransitionSelector::new(lo, hi).unwrap(),
                        rabi,
                        phase,
                        t,
                    )
                    .unwrap(),
                )
            });
        let wait = (0.0f64..1e-3).prop_map(|duration| Segment::Wait { duration });
        prop_oneof![pulse, wait]
    }

    proptest! {
        #[test]
        fn emit_parse_is_bit_exact(segs in proptest::collection::vec((arb_segment(), proptest::option::of((1u8..=5, 0usize..3))), 0..20)) {
            let mut s = Schedule::new();
            for (seg, tag) in segs {
                s.push(seg, tag.map(|(st, sub)| StepTag::new(st, SubOp::ALL[sub]))).unwrap();
            }
            let text = emit_schedule(&s);
            let parsed = parse_schedule(&text).unwrap();
            prop_assert_eq!(&parsed, &s);
            prop_assert_eq!(emit_schedule(&parsed), text);
        }
    }
}
