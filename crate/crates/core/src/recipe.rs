//! `.mbl` recipe files: a line-oriented description of a marbled image.
//!
//! ```text
//! version 1
//! viewport -0.1 -0.1 0.2 0.2 400 400   # min_x min_y width height px py
//! base half x #000000 #ffffff
//! vortex 0 0 0.0251327 1e-3 1           # cx cy gamma nu t
//! render yinyang.ppm supersample 2
//! ```
//!
//! A `#` opens a comment when it is the first thing on a line or is followed
//! by whitespace; elsewhere `#rrggbb` is a color literal. All values are SI.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::raster::{Axis, BasePattern, Viewport};
use crate::vortexmath::VortexParams;
use crate::xform::{normalize_direction, CircleStroke, Deformation, Drop, LineStroke, Point2, Rgb, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCode {
    UnknownKeyword,
    Arity,
    InvalidNumber,
    NonFinite,
    NonPositive,
    InvalidInteger,
    InvalidColor,
    ZeroDirection,
    MissingViewport,
    MissingBase,
    MissingRender,
    DuplicateViewport,
    DuplicateBase,
    DuplicateRender,
    BadSupersample,
    NonSquarePixels,
    UnknownPattern,
    InvalidAxis,
    UnsupportedVersion,
    MisplacedVersion,
    Negative,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 21] = [
        ErrorCode::UnknownKeyword,
        ErrorCode::Arity,
        ErrorCode::InvalidNumber,
        ErrorCode::NonFinite,
        ErrorCode::NonPositive,
        ErrorCode::InvalidInteger,
        ErrorCode::InvalidColor,
        ErrorCode::ZeroDirection,
        ErrorCode::MissingViewport,
        ErrorCode::MissingBase,
        ErrorCode::MissingRender,
        ErrorCode::DuplicateViewport,
        ErrorCode::DuplicateBase,
        ErrorCode::DuplicateRender,
        ErrorCode::BadSupersample,
        ErrorCode::NonSquarePixels,
        ErrorCode::UnknownPattern,
        ErrorCode::InvalidAxis,
        ErrorCode::UnsupportedVersion,
        ErrorCode::MisplacedVersion,
        ErrorCode::Negative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::UnknownKeyword => "E01",
            ErrorCode::Arity => "E02",
            ErrorCode::InvalidNumber => "E03",
            ErrorCode::NonFinite => "E04",
            ErrorCode::NonPositive => "E05",
            ErrorCode::InvalidInteger => "E06",
            ErrorCode::InvalidColor => "E07",
            ErrorCode::ZeroDirection => "E08",
            ErrorCode::MissingViewport => "E09",
            ErrorCode::MissingBase => "E10",
            ErrorCode::MissingRender => "E11",
            ErrorCode::DuplicateViewport => "E12",
            ErrorCode::DuplicateBase => "E13",
            ErrorCode::DuplicateRender => "E14",
            ErrorCode::BadSupersample => "E15",
            ErrorCode::NonSquarePixels => "E16",
            ErrorCode::UnknownPattern => "E17",
            ErrorCode::InvalidAxis => "E18",
            ErrorCode::UnsupportedVersion => "E19",
            ErrorCode::MisplacedVersion => "E20",
            ErrorCode::Negative => "E21",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Diagnostic with a 1-based line and column (in characters).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: error[{code}]: {message}")]
pub struct ParseError {
    pub code: ErrorCode,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSpec {
    pub path: String,
    pub supersample: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub version: Option<u32>,
    pub viewport: Viewport,
    pub base: BasePattern,
    pub steps: Vec<Deformation>,
    pub output: OutputSpec,
}

impl Recipe {
    pub fn scene(&self) -> Scene {
        Scene {
            background: self.base.primary_color(),
            steps: self.steps.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

// Splits a line into whitespace-separated tokens, stopping at a comment.
fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut column = 0;
    let mut chars = line.char_indices().peekable();
    while let Some((i, ch)) = chars.next() {
        column += 1;
        if ch.is_whitespace() {
            if let Some((s, c)) = start.take() {
                tokens.push(Token {
                    text: &line[s..i],
                    column: c,
                });
            }
            continue;
        }
        if start.is_none() {
            let opens_comment = ch == '#'
                && (tokens.is_empty() || chars.peek().is_none_or(|&(_, next)| next.is_whitespace()));
            if opens_comment {
                return tokens;
            }
            start = Some((i, column));
        }
    }
    if let Some((s, c)) = start {
        tokens.push(Token {
            text: &line[s..],
            column: c,
        });
    }
    tokens
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn error(&self, code: ErrorCode, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            code,
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn keyword(&self) -> Token<'a> {
        self.tokens[0]
    }

    // Arguments after the keyword, checking the count.
    fn args(&self, expected: usize, usage: &str) -> Result<&[Token<'a>], ParseError> {
        let args = &self.tokens[1..];
        if args.len() == expected {
            return Ok(args);
        }
        let column = if args.len() > expected {
            args[expected].column
        } else {
            self.keyword().column
        };
        Err(self.error(
            ErrorCode::Arity,
            column,
            format!(
                "`{}` takes {expected} argument(s) ({usage}), found {}",
                self.keyword().text,
                args.len()
            ),
        ))
    }

    fn num(&self, tok: Token<'_>, what: &str) -> Result<f64, ParseError> {
        let looks_numeric = tok
            .text
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
        let value = if looks_numeric { tok.text.parse::<f64>().ok() } else { None };
        match (value, tok.text.parse::<f64>()) {
            (Some(v), _) if v.is_finite() => Ok(v),
            (Some(_), _) | (None, Ok(_)) => Err(self.error(
                ErrorCode::NonFinite,
                tok.column,
                format!("{what} must be finite, found `{}`", tok.text),
            )),
            (None, Err(_)) => Err(self.error(
                ErrorCode::InvalidNumber,
                tok.column,
                format!("expected a number for {what}, found `{}`", tok.text),
            )),
        }
    }

    fn positive(&self, tok: Token<'_>, what: &str) -> Result<f64, ParseError> {
        let v = self.num(tok, what)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.error(
                ErrorCode::NonPositive,
                tok.column,
                format!("{what} must be positive, found `{}`", tok.text),
            ))
        }
    }

    fn count(&self, tok: Token<'_>, what: &str) -> Result<u32, ParseError> {
        let v: u32 = tok.text.parse().map_err(|_| {
            self.error(
                ErrorCode::InvalidInteger,
                tok.column,
                format!("expected a non-negative integer for {what}, found `{}`", tok.text),
            )
        })?;
        if v == 0 {
            return Err(self.error(
                ErrorCode::NonPositive,
                tok.column,
                format!("{what} must be at least 1"),
            ));
        }
        Ok(v)
    }

    fn color(&self, tok: Token<'_>) -> Result<Rgb, ParseError> {
        let bad = || {
            self.error(
                ErrorCode::InvalidColor,
                tok.column,
                format!("expected a color `#rrggbb`, found `{}`", tok.text),
            )
        };
        let hex = tok.text.strip_prefix('#').ok_or_else(bad)?;
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(bad());
        }
        let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| bad());
        Ok(Rgb([byte(0)?, byte(2)?, byte(4)?]))
    }

    fn point(&self, x: Token<'_>, y: Token<'_>, what: &str) -> Result<Point2, ParseError> {
        Ok(Point2::new(self.num(x, what)?, self.num(y, what)?))
    }
}

fn parse_viewport(line: &Line<'_>) -> Result<Viewport, ParseError> {
    let a = line.args(6, "min_x min_y width height px py")?;
    let min = line.point(a[0], a[1], "viewport corner")?;
    let width = line.positive(a[2], "viewport width")?;
    let height = line.positive(a[3], "viewport height")?;
    let px = line.count(a[4], "horizontal pixel count")?;
    let py = line.count(a[5], "vertical pixel count")?;
    let vp = Viewport {
        min,
        width,
        height,
        pixels_x: px,
        pixels_y: py,
    };
    vp.validate().map_err(|e| {
        line.error(
            ErrorCode::NonSquarePixels,
            line.keyword().column,
            e.to_string(),
        )
    })?;
    Ok(vp)
}

fn parse_base(line: &Line<'_>) -> Result<BasePattern, ParseError> {
    let Some(kind) = line.tokens.get(1).copied() else {
        return Err(line.error(
            ErrorCode::Arity,
            line.keyword().column,
            "`base` needs a pattern: solid, half, stripes, rings or checker",
        ));
    };
    // shift so that `args` counts the pattern's own arguments
    let sub = Line {
        number: line.number,
        tokens: line.tokens[1..].to_vec(),
    };
    match kind.text {
        "solid" => {
            let a = sub.args(1, "color")?;
            Ok(BasePattern::Solid(sub.color(a[0])?))
        }
        "half" => {
            let a = sub.args(3, "axis color color")?;
            let axis = match a[0].text {
                "x" => Axis::X,
                "y" => Axis::Y,
                other => {
                    return Err(sub.error(
                        ErrorCode::InvalidAxis,
                        a[0].column,
                        format!("axis must be `x` or `y`, found `{other}`"),
                    ))
                }
            };
            Ok(BasePattern::HalfPlane {
                axis,
                first: sub.color(a[1])?,
                second: sub.color(a[2])?,
            })
        }
        "stripes" => {
            let a = sub.args(4, "period phase color color")?;
            Ok(BasePattern::Stripes {
                period: sub.positive(a[0], "stripe period")?,
                phase: sub.num(a[1], "stripe phase")?,
                first: sub.color(a[2])?,
                second: sub.color(a[3])?,
            })
        }
        "rings" => {
            let a = sub.args(5, "cx cy period color color")?;
            Ok(BasePattern::Rings {
                center: sub.point(a[0], a[1], "ring center")?,
                period: sub.positive(a[2], "ring period")?,
                first: sub.color(a[3])?,
                second: sub.color(a[4])?,
            })
        }
        "checker" => {
            let a = sub.args(3, "period color color")?;
            Ok(BasePattern::Checker {
                period: sub.positive(a[0], "checker period")?,
                first: sub.color(a[1])?,
                second: sub.color(a[2])?,
            })
        }
        other => Err(line.error(
            ErrorCode::UnknownPattern,
            kind.column,
            format!("unknown base pattern `{other}`"),
        )),
    }
}

fn parse_step(line: &Line<'_>) -> Result<Deformation, ParseError> {
    let kw = line.keyword();
    match kw.text {
        "vortex" => {
            let a = line.args(5, "cx cy gamma nu t")?;
            let center = line.point(a[0], a[1], "vortex center")?;
            let gamma = line.num(a[2], "circulation")?;
            let nu = line.positive(a[3], "viscosity")?;
            let t = line.num(a[4], "elapsed time")?;
            if t < 0.0 {
                return Err(line.error(
                    ErrorCode::Negative,
                    a[4].column,
                    format!("elapsed time must not be negative, found `{}`", a[4].text),
                ));
            }
            Ok(Deformation::Vortex(VortexParams { gamma, nu, t, center }))
        }
        "line" => {
            let a = line.args(6, "ox oy dx dy z lambda")?;
            let origin = line.point(a[0], a[1], "line origin")?;
            let dir = line.point(a[2], a[3], "line direction")?;
            let z = line.num(a[4], "stroke displacement")?;
            let lambda = line.positive(a[5], "falloff width")?;
            let dir = normalize_direction(dir).map_err(|_| {
                line.error(
                    ErrorCode::ZeroDirection,
                    a[2].column,
                    "line direction must be a nonzero vector",
                )
            })?;
            let stroke = LineStroke::new(origin, dir, z, lambda)
                .map_err(|e| line.error(ErrorCode::NonFinite, a[2].column, e.to_string()))?;
            Ok(Deformation::Line(stroke))
        }
        "circle" => {
            let a = line.args(5, "cx cy R z lambda")?;
            Ok(Deformation::Circle(CircleStroke {
                center: line.point(a[0], a[1], "circle center")?,
                radius: line.positive(a[2], "circle radius")?,
                z: line.num(a[3], "angular sweep")?,
                lambda: line.positive(a[4], "falloff width")?,
            }))
        }
        "drop" => {
            let a = line.args(4, "cx cy rho color")?;
            Ok(Deformation::Drop(Drop {
                center: line.point(a[0], a[1], "drop center")?,
                rho: line.positive(a[2], "drop radius")?,
                color: line.color(a[3])?,
            }))
        }
        other => Err(line.error(
            ErrorCode::UnknownKeyword,
            kw.column,
            format!("unknown keyword `{other}`"),
        )),
    }
}

fn parse_render(line: &Line<'_>) -> Result<OutputSpec, ParseError> {
    let args = &line.tokens[1..];
    match args.len() {
        1 => Ok(OutputSpec {
            path: args[0].text.to_string(),
            supersample: 1,
        }),
        3 => {
            if args[1].text != "supersample" {
                return Err(line.error(
                    ErrorCode::Arity,
                    args[1].column,
                    format!("expected `supersample`, found `{}`", args[1].text),
                ));
            }
            let n: u32 = args[2].text.parse().map_err(|_| {
                line.error(
                    ErrorCode::InvalidInteger,
                    args[2].column,
                    format!("expected an integer supersample factor, found `{}`", args[2].text),
                )
            })?;
            if !matches!(n, 1 | 2 | 4) {
                return Err(line.error(
                    ErrorCode::BadSupersample,
                    args[2].column,
                    format!("supersample factor must be 1, 2 or 4, found {n}"),
                ));
            }
            Ok(OutputSpec {
                path: args[0].text.to_string(),
                supersample: n,
            })
        }
        _ => Err(line
            .args(1, "path [supersample n]")
            .expect_err("argument count is not 1 or 3")),
    }
}

/// Parse a recipe, stopping at the first diagnostic.
pub fn parse(text: &str) -> Result<Recipe, ParseError> {
    let mut version = None;
    let mut viewport: Option<Viewport> = None;
    let mut base: Option<BasePattern> = None;
    let mut output: Option<OutputSpec> = None;
    let mut steps = Vec::new();
    let mut seen_statement = false;
    let mut line_count = 0;

    for (idx, raw) in text.split('\n').enumerate() {
        line_count = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let line = Line {
            number: idx + 1,
            tokens: tokenize(raw),
        };
        if line.tokens.is_empty() {
            continue;
        }
        let kw = line.keyword();
        let duplicate = |code, what: &str| {
            line.error(code, kw.column, format!("{what} given more than once"))
        };
        match kw.text {
            "version" => {
                if seen_statement || version.is_some() {
                    return Err(line.error(
                        ErrorCode::MisplacedVersion,
                        kw.column,
                        "`version` must be the first statement",
                    ));
                }
                let a = line.args(1, "number")?;
                if a[0].text != "1" {
                    return Err(line.error(
                        ErrorCode::UnsupportedVersion,
                        a[0].column,
                        format!("unsupported recipe version `{}`", a[0].text),
                    ));
                }
                version = Some(1);
            }
            "viewport" => {
                if viewport.is_some() {
                    return Err(duplicate(ErrorCode::DuplicateViewport, "viewport"));
                }
                viewport = Some(parse_viewport(&line)?);
            }
            "base" => {
                if base.is_some() {
                    return Err(duplicate(ErrorCode::DuplicateBase, "base"));
                }
                base = Some(parse_base(&line)?);
            }
            "render" => {
                if output.is_some() {
                    return Err(duplicate(ErrorCode::DuplicateRender, "render"));
                }
                output = Some(parse_render(&line)?);
            }
            _ => steps.push(parse_step(&line)?),
        }
        seen_statement = true;
    }

    let eof = |code, message: &str| ParseError {
        code,
        line: line_count.max(1),
        column: 1,
        message: message.to_string(),
    };
    Ok(Recipe {
        version,
        viewport: viewport.ok_or_else(|| eof(ErrorCode::MissingViewport, "missing `viewport`"))?,
        base: base.ok_or_else(|| eof(ErrorCode::MissingBase, "missing `base`"))?,
        steps,
        output: output.ok_or_else(|| eof(ErrorCode::MissingRender, "missing `render`"))?,
    })
}

fn hex(c: Rgb) -> String {
    format!("#{:02x}{:02x}{:02x}", c.0[0], c.0[1], c.0[2])
}

/// Canonical text form; parsing it yields an equal [`Recipe`].
pub fn format(recipe: &Recipe) -> String {
    let mut out = String::new();
    if let Some(v) = recipe.version {
        let _ = writeln!(out, "version {v}");
    }
    let vp = &recipe.viewport;
    let _ = writeln!(
        out,
        "viewport {:?} {:?} {:?} {:?} {} {}",
        vp.min.x, vp.min.y, vp.width, vp.height, vp.pixels_x, vp.pixels_y
    );
    let _ = match recipe.base {
        BasePattern::Solid(c) => writeln!(out, "base solid {}", hex(c)),
        BasePattern::HalfPlane { axis, first, second } => {
            let axis = match axis {
                Axis::X => "x",
                Axis::Y => "y",
            };
            writeln!(out, "base half {axis} {} {}", hex(first), hex(second))
        }
        BasePattern::Stripes {
            period,
            phase,
            first,
            second,
        } => writeln!(out, "base stripes {period:?} {phase:?} {} {}", hex(first), hex(second)),
        BasePattern::Rings {
            center,
            period,
            first,
            second,
        } => writeln!(
            out,
            "base rings {:?} {:?} {period:?} {} {}",
            center.x,
            center.y,
            hex(first),
            hex(second)
        ),
        BasePattern::Checker { period, first, second } => {
            writeln!(out, "base checker {period:?} {} {}", hex(first), hex(second))
        }
    };
    for step in &recipe.steps {
        let _ = match step {
            Deformation::Vortex(v) => writeln!(
                out,
                "vortex {:?} {:?} {:?} {:?} {:?}",
                v.center.x, v.center.y, v.gamma, v.nu, v.t
            ),
            Deformation::Line(s) => {
                let d = s.direction();
                writeln!(
                    out,
                    "line {:?} {:?} {:?} {:?} {:?} {:?}",
                    s.origin.x, s.origin.y, d.x, d.y, s.z, s.lambda
                )
            }
            Deformation::Circle(s) => writeln!(
                out,
                "circle {:?} {:?} {:?} {:?} {:?}",
                s.center.x, s.center.y, s.radius, s.z, s.lambda
            ),
            Deformation::Drop(d) => writeln!(
                out,
                "drop {:?} {:?} {:?} {}",
                d.center.x,
                d.center.y,
                d.rho,
                hex(d.color)
            ),
        };
    }
    let _ = writeln!(
        out,
        "render {} supersample {}",
        recipe.output.path, recipe.output.supersample
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "viewport 0 0 1 1 10 10\nbase solid #ffffff\nrender out.ppm\n";

    #[test]
    fn minimal_recipe() {
        let r = parse(MINIMAL).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.version, None);
        assert_eq!(r.base, BasePattern::Solid(Rgb::WHITE));
        assert_eq!(
            r.output,
            OutputSpec {
                path: "out.ppm".into(),
                supersample: 1
            }
        );
        assert_eq!(r.scene().background, Rgb::WHITE);
    }

    #[test]
    fn vortex_fields() {
        let r = parse(&format!("{MINIMAL}vortex 0 0 1e-3 1e-6 10\n")).unwrap();
        assert_eq!(
            r.steps,
            vec![Deformation::Vortex(VortexParams {
                gamma: 1e-3,
                nu: 1e-6,
                t: 10.0,
                center: Point2::ORIGIN
            })]
        );
    }

    #[test]
    fn comments_and_colors() {
        let text = "# heading\n  viewport 0 0 1 1 2 2 # trailing\nbase half y #0a0B0c #FFFFFF\n\nrender a.ppm supersample 4 #\n";
        let r = parse(text).unwrap();
        assert_eq!(
            r.base,
            BasePattern::HalfPlane {
                axis: Axis::Y,
                first: Rgb([10, 11, 12]),
                second: Rgb::WHITE
            }
        );
        assert_eq!(r.output.supersample, 4);
    }

    #[test]
    fn direction_is_normalized() {
        let r = parse(&format!("{MINIMAL}line 0 0 3 4 0.1 0.01\n")).unwrap();
        let Deformation::Line(s) = r.steps[0] else { panic!() };
        assert!((s.direction().x - 0.6).abs() < 1e-15 && (s.direction().y - 0.8).abs() < 1e-15);
        let e = parse(&format!("{MINIMAL}line 0 0 0 0 0.1 0.01\n")).unwrap_err();
        assert_eq!((e.code, e.line, e.column), (ErrorCode::ZeroDirection, 4, 10));
    }

    #[test]
    fn positions_are_one_based() {
        let e = parse("viewport 0 0 1 1 10 10\nbase solid #fffff\n").unwrap_err();
        assert_eq!((e.code, e.line, e.column), (ErrorCode::InvalidColor, 2, 12));
        let e = parse("  bogus 1 2\n").unwrap_err();
        assert_eq!((e.code, e.line, e.column), (ErrorCode::UnknownKeyword, 1, 3));
        assert_eq!(e.to_string(), "1:3: error[E01]: unknown keyword `bogus`");
    }

    #[test]
    fn missing_sections_point_at_end() {
        let e = parse("").unwrap_err();
        assert_eq!((e.code, e.line, e.column), (ErrorCode::MissingViewport, 1, 1));
        let e = parse("viewport 0 0 1 1 1 1\nrender x.ppm\n").unwrap_err();
        assert_eq!((e.code, e.line), (ErrorCode::MissingBase, 3));
    }

    #[test]
    fn non_finite_numbers() {
        for bad in ["inf", "NaN", "1e999", "-infinity"] {
            let e = parse(&format!("{MINIMAL}vortex 0 0 {bad} 1e-6 1\n")).unwrap_err();
            assert_eq!(e.code, ErrorCode::NonFinite, "{bad}");
        }
        let e = parse(&format!("{MINIMAL}vortex 0 0 1x 1e-6 1\n")).unwrap_err();
        assert_eq!(e.code, ErrorCode::InvalidNumber);
    }

    #[test]
    fn formatting_round_trips() {
        let text = "version 1\nviewport -0.1 -0.1 0.2 0.2 40 40\nbase rings 0 0 0.01 #102030 #f0e0d0\n\
                    vortex 0.01 0 0.0251 1e-3 0.5\nline 0 0 1 1 0.02 0.003\ncircle 0 0 0.05 -0.4 0.01\n\
                    drop 0.02 0.02 0.01 #ff0000\nrender fig.ppm\n";
        let r = parse(text).unwrap();
        assert_eq!(parse(&format(&r)).unwrap(), r);
    }
}
