//! Static diagrams: strands for Artin words, non-crossing partitions on a circle for dual words.

use std::f64::consts::PI;
use std::fmt::Write;

use braidforge::{normalize, Flavor, GeneratorWord, MonoidSpec};
use clap::ValueEnum;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Style {
    Ascii,
    Svg,
}

/// A crossing or a partition to draw, with an optional caption.
struct Piece {
    blocks: Vec<Vec<usize>>,
    caption: String,
}

pub fn render(word: &GeneratorWord, style: Style, normal: bool) -> String {
    let spec = word.spec();
    match (spec.flavor(), style) {
        (Flavor::Artin, Style::Ascii) => strands_ascii(spec.n(), &crossings(word, normal)),
        (Flavor::Artin, Style::Svg) => strands_svg(spec.n(), &crossings(word, normal)),
        (Flavor::Dual, Style::Ascii) => partitions_ascii(&pieces(word, normal)),
        (Flavor::Dual, Style::Svg) => partitions_svg(spec.n(), &pieces(word, normal)),
    }
}

/// Left strand (0-based) of each crossing; `None` marks a factor boundary.
fn crossings(word: &GeneratorWord, normal: bool) -> Vec<Option<usize>> {
    if !normal {
        return word.letters().iter().map(|g| Some(g.i as usize - 1)).collect();
    }
    let b = normalize(word);
    let spec = word.spec();
    let mut out = Vec::new();
    for (k, x) in b.factors().iter().enumerate() {
        if k > 0 {
            out.push(None);
        }
        out.extend(spec.word_of(x).iter().map(|g| Some(g.i as usize - 1)));
    }
    out
}

fn blocks_of_code(code: &[u8]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (point, &min) in code.iter().enumerate() {
        match blocks.iter_mut().find(|b| b[0] + 1 == min as usize) {
            Some(b) => b.push(point),
            None => blocks.push(vec![point]),
        }
    }
    blocks
}

fn pieces(word: &GeneratorWord, normal: bool) -> Vec<Piece> {
    let spec: MonoidSpec = word.spec();
    if normal {
        let b = normalize(word);
        return b
            .factors()
            .iter()
            .map(|x| Piece { blocks: blocks_of_code(x.code()), caption: spec.simple_name(x) })
            .collect();
    }
    word.letters()
        .iter()
        .map(|g| {
            let (i, j) = (g.i as usize - 1, g.j as usize - 1);
            let mut blocks = vec![vec![i, j]];
            blocks.extend((0..spec.n()).filter(|&p| p != i && p != j).map(|p| vec![p]));
            blocks.sort();
            Piece { blocks, caption: spec.generator_name(*g) }
        })
        .collect()
}

fn strands_ascii(n: usize, steps: &[Option<usize>]) -> String {
    let width = 2 * n - 1;
    let mut out = String::new();
    let labels: Vec<String> = (1..=n).map(|s| (s % 10).to_string()).collect();
    writeln!(out, "{}", labels.join(" ")).unwrap();
    let plain: String = vec!["|"; n].join(" ");
    for step in steps {
        match step {
            None => writeln!(out, "{}", "-".repeat(width)).unwrap(),
            Some(a) => {
                let mut rows = [plain.clone().into_bytes(), plain.clone().into_bytes(), plain.clone().into_bytes()];
                let c = 2 * a;
                rows[0][c] = b'\\';
                rows[0][c + 2] = b'/';
                rows[1][c] = b' ';
                rows[1][c + 1] = b'\\';
                rows[1][c + 2] = b' ';
                rows[2][c] = b'/';
                rows[2][c + 2] = b'\\';
                for r in rows {
                    writeln!(out, "{}", String::from_utf8(r).expect("ascii").trim_end()).unwrap();
                }
            }
        }
    }
    writeln!(out, "{plain}").unwrap();
    out
}

const CELL: f64 = 40.0;

fn strands_svg(n: usize, steps: &[Option<usize>]) -> String {
    let x = |s: usize| CELL + CELL * s as f64;
    let rows = steps.iter().filter(|s| s.is_some()).count();
    let (w, h) = (CELL * (n as f64 + 1.0), CELL * (rows as f64 + 2.0));
    let mut body = String::new();
    for s in 0..n {
        writeln!(body, r#"  <text stroke="none" x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, x(s), CELL * 0.6, s + 1).unwrap();
    }
    let mut y0 = CELL;
    for step in steps {
        let Some(a) = *step else {
            writeln!(body, r#"  <line x1="{:.1}" y1="{y0:.1}" x2="{:.1}" y2="{y0:.1}" stroke="gray" stroke-dasharray="4 4"/>"#, CELL * 0.5, w - CELL * 0.5).unwrap();
            continue;
        };
        let y1 = y0 + CELL;
        for s in (0..n).filter(|&s| s != a && s != a + 1) {
            writeln!(body, r#"  <line x1="{0:.1}" y1="{y0:.1}" x2="{0:.1}" y2="{y1:.1}"/>"#, x(s)).unwrap();
        }
        // over strand from the left, under strand broken around the crossing
        writeln!(body, r#"  <line x1="{:.1}" y1="{y0:.1}" x2="{:.1}" y2="{y1:.1}"/>"#, x(a), x(a + 1)).unwrap();
        let at = |t: f64| (x(a + 1) + (x(a) - x(a + 1)) * t, y0 + CELL * t);
        for (t0, t1) in [(0.0, 0.38), (0.62, 1.0)] {
            let ((xa, ya), (xb, yb)) = (at(t0), at(t1));
            writeln!(body, r#"  <line x1="{xa:.1}" y1="{ya:.1}" x2="{xb:.1}" y2="{yb:.1}"/>"#).unwrap();
        }
        y0 = y1;
    }
    for s in 0..n {
        writeln!(body, r#"  <line x1="{0:.1}" y1="{y0:.1}" x2="{0:.1}" y2="{1:.1}"/>"#, x(s), y0 + CELL * 0.5).unwrap();
    }
    svg(w, h, &body)
}

fn partitions_ascii(pieces: &[Piece]) -> String {
    let mut out = String::new();
    for p in pieces {
        let blocks: Vec<String> = p
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|q| (q + 1).to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        writeln!(out, "[{}]  {}", p.caption, blocks.join(" ")).unwrap();
    }
    out
}

fn partitions_svg(n: usize, pieces: &[Piece]) -> String {
    let radius = CELL;
    let pitch = 3.0 * CELL;
    let point = |cx: f64, q: usize, r: f64| {
        let angle = -PI / 2.0 + 2.0 * PI * q as f64 / n as f64;
        (cx + r * angle.cos(), 1.75 * CELL + r * angle.sin())
    };
    let mut body = String::new();
    for (k, piece) in pieces.iter().enumerate() {
        let cx = 1.5 * CELL + pitch * k as f64;
        writeln!(body, r#"  <circle cx="{cx:.1}" cy="{:.1}" r="{radius:.1}" fill="none" stroke="lightgray"/>"#, 1.75 * CELL).unwrap();
        for block in piece.blocks.iter().filter(|b| b.len() > 1) {
            let pts: Vec<String> = block
                .iter()
                .map(|&q| {
                    let (px, py) = point(cx, q, radius);
                    format!("{px:.1},{py:.1}")
                })
                .collect();
            writeln!(body, r##"  <polygon points="{}" fill="#9ecae1" stroke="black"/>"##, pts.join(" ")).unwrap();
        }
        for q in 0..n {
            let (px, py) = point(cx, q, radius);
            let (lx, ly) = point(cx, q, radius + 12.0);
            writeln!(body, r#"  <circle cx="{px:.1}" cy="{py:.1}" r="3"/>"#).unwrap();
            writeln!(body, r#"  <text stroke="none" x="{lx:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, ly + 4.0, q + 1).unwrap();
        }
        writeln!(body, r#"  <text stroke="none" x="{cx:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, 3.5 * CELL, piece.caption).unwrap();
    }
    svg(pitch * pieces.len().max(1) as f64, 4.0 * CELL, &body)
}

fn svg(w: f64, h: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\" \
         font-family=\"sans-serif\" font-size=\"12\" stroke=\"black\" stroke-width=\"2\">\n{body}</svg>\n"
    )
}
