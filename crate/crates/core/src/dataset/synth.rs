//! Synthetic object sources.
//!
//! * Lowercase letters drawn from fixed stroke skeletons with a random affine
//!   jitter and rasterized to 28x28 bytes (MNIST-like framing: glyph inside
//!   the central 20x20 box). Used when no EMNIST letters file is supplied.
//! * Sparse binary blob objects for the phase-retrieval comparison.

use crate::numerics::{RealGrid, SeededRng};
use crate::scalar::Real;

pub const LETTER_SIDE: usize = 28;

type Pt = (f64, f64);

fn arc(cx: f64, cy: f64, r: f64, from_deg: f64, to_deg: f64) -> Vec<Pt> {
    let steps = ((to_deg - from_deg).abs() / 15.0).ceil().max(2.0) as usize;
    (0..=steps)
        .map(|i| {
            let a = (from_deg + (to_deg - from_deg) * i as f64 / steps as f64).to_radians();
            (cx + r * a.cos(), cy + r * a.sin())
        })
        .collect()
}

fn line(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Pt> {
    vec![(x0, y0), (x1, y1)]
}

fn dot(x: f64, y: f64) -> Vec<Pt> {
    vec![(x, y - 0.03), (x, y + 0.03)]
}

/// Stroke skeleton in the unit box (y down; x-height 0.35, baseline 0.8).
fn glyph(letter: char) -> Vec<Vec<Pt>> {
    let bowl = || arc(0.5, 0.575, 0.225, 0.0, 360.0);
    match letter {
        'a' => vec![bowl(), line(0.725, 0.35, 0.725, 0.8)],
        'b' => vec![bowl(), line(0.275, 0.0, 0.275, 0.8)],
        'c' => vec![arc(0.5, 0.575, 0.225, -40.0, -320.0)],
        'd' => vec![bowl(), line(0.725, 0.0, 0.725, 0.8)],
        'e' => vec![line(0.275, 0.575, 0.725, 0.575), arc(0.5, 0.575, 0.225, 0.0, -315.0)],
        'f' => vec![
            arc(0.6, 0.15, 0.15, -20.0, -180.0),
            line(0.45, 0.15, 0.45, 0.8),
            line(0.28, 0.35, 0.66, 0.35),
        ],
        'g' => vec![
            arc(0.5, 0.525, 0.2, 0.0, 360.0),
            line(0.7, 0.35, 0.7, 0.85),
            arc(0.5, 0.85, 0.2, 0.0, 150.0),
        ],
        'h' => vec![
            line(0.3, 0.0, 0.3, 0.8),
            arc(0.5, 0.55, 0.2, -180.0, 0.0),
            line(0.7, 0.55, 0.7, 0.8),
        ],
        'i' => vec![line(0.5, 0.35, 0.5, 0.8), dot(0.5, 0.18)],
        'j' => vec![
            line(0.55, 0.35, 0.55, 0.88),
            arc(0.4, 0.88, 0.15, 0.0, 150.0),
            dot(0.55, 0.18),
        ],
        'k' => vec![
            line(0.3, 0.0, 0.3, 0.8),
            line(0.7, 0.35, 0.3, 0.62),
            line(0.42, 0.55, 0.72, 0.8),
        ],
        'l' => vec![line(0.5, 0.0, 0.5, 0.8)],
        'm' => vec![
            line(0.2, 0.35, 0.2, 0.8),
            arc(0.35, 0.5, 0.15, -180.0, 0.0),
            line(0.5, 0.5, 0.5, 0.8),
            arc(0.65, 0.5, 0.15, -180.0, 0.0),
            line(0.8, 0.5, 0.8, 0.8),
        ],
        'n' => vec![
            line(0.3, 0.35, 0.3, 0.8),
            arc(0.5, 0.55, 0.2, -180.0, 0.0),
            line(0.7, 0.55, 0.7, 0.8),
        ],
        'o' => vec![bowl()],
        'p' => vec![bowl(), line(0.275, 0.35, 0.275, 1.0)],
        'q' => vec![bowl(), line(0.725, 0.35, 0.725, 1.0)],
        'r' => vec![line(0.35, 0.35, 0.35, 0.8), arc(0.55, 0.55, 0.2, -180.0, -45.0)],
        's' => vec![vec![
            (0.7, 0.4),
            (0.55, 0.35),
            (0.36, 0.37),
            (0.3, 0.47),
            (0.45, 0.56),
            (0.65, 0.62),
            (0.7, 0.72),
            (0.6, 0.8),
            (0.4, 0.8),
            (0.28, 0.74),
        ]],
        't' => vec![
            vec![(0.45, 0.12), (0.45, 0.72), (0.52, 0.8), (0.66, 0.79)],
            line(0.25, 0.35, 0.7, 0.35),
        ],
        'u' => vec![
            line(0.3, 0.35, 0.3, 0.6),
            arc(0.5, 0.6, 0.2, 180.0, 0.0),
            line(0.7, 0.35, 0.7, 0.8),
        ],
        'v' => vec![vec![(0.25, 0.35), (0.5, 0.8), (0.75, 0.35)]],
        'w' => vec![vec![(0.15, 0.35), (0.32, 0.8), (0.5, 0.5), (0.68, 0.8), (0.85, 0.35)]],
        'x' => vec![line(0.27, 0.35, 0.73, 0.8), line(0.73, 0.35, 0.27, 0.8)],
        'y' => vec![line(0.27, 0.35, 0.5, 0.8), line(0.73, 0.35, 0.4, 1.0)],
        'z' => vec![vec![(0.28, 0.35), (0.72, 0.35), (0.28, 0.8), (0.72, 0.8)]],
        _ => Vec::new(),
    }
}

fn segment_distance(p: Pt, a: Pt, b: Pt) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

/// Renders one jittered lowercase letter as a 28x28 byte image.
///
/// Returns `None` for characters without a skeleton.
pub fn render_letter(letter: char, rng: &mut SeededRng) -> Option<Vec<u8>> {
    let strokes = glyph(letter);
    if strokes.is_empty() {
        return None;
    }
    let scale = 0.9 + 0.2 * rng.uniform();
    let angle = (rng.uniform() - 0.5) * 20f64.to_radians();
    let shear = (rng.uniform() - 0.5) * 0.3;
    let (tx, ty) = ((rng.uniform() - 0.5) * 2.0, (rng.uniform() - 0.5) * 2.0);
    let half_width = 0.9 + 0.5 * rng.uniform();
    let (sin, cos) = angle.sin_cos();
    let place = |(x, y): Pt| -> Pt {
        let (u, v) = (x - 0.5 + shear * (y - 0.5), y - 0.5);
        let (u, v) = (cos * u - sin * v, sin * u + cos * v);
        (14.0 + 20.0 * scale * u + tx, 14.0 + 20.0 * scale * v + ty)
    };
    let segments: Vec<(Pt, Pt)> = strokes
        .iter()
        .flat_map(|s| s.windows(2).map(|w| (place(w[0]), place(w[1]))).collect::<Vec<_>>())
        .collect();
    let mut out = vec![0u8; LETTER_SIDE * LETTER_SIDE];
    for r in 0..LETTER_SIDE {
        for c in 0..LETTER_SIDE {
            let p = (c as f64 + 0.5, r as f64 + 0.5);
            let d = segments
                .iter()
                .map(|&(a, b)| segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min);
            let v = (half_width + 0.5 - d).clamp(0.0, 1.0);
            out[r * LETTER_SIDE + c] = (255.0 * v).round() as u8;
        }
    }
    Some(out)
}

/// `count` letters cycling through `a..z`, each with its own jitter.
/// Labels are the ASCII codes.
pub fn letter_set(count: usize, seed: u64) -> Vec<(Vec<u8>, i16)> {
    (0..count)
        .map(|i| {
            let letter = (b'a' + (i % 26) as u8) as char;
            let mut rng = SeededRng::derived(seed, i as u64);
            let img = render_letter(letter, &mut rng).expect("a..z have skeletons");
            (img, letter as i16)
        })
        .collect()
}

/// Union of 4-6 filled disks (radius 1.5-2.5 px) with centers away from the border.
pub fn blob_object<T: Real>(side: usize, rng: &mut SeededRng) -> RealGrid<T> {
    let count = 4 + rng.below(3);
    let margin = side as f64 * 0.19;
    let disks: Vec<(f64, f64, f64)> = (0..count)
        .map(|_| {
            let cy = margin + rng.uniform() * (side as f64 - 2.0 * margin);
            let cx = margin + rng.uniform() * (side as f64 - 2.0 * margin);
            (cy, cx, 1.5 + rng.uniform())
        })
        .collect();
    RealGrid::from_fn(side, side, |r, c| {
        let hit = disks.iter().any(|&(cy, cx, rad)| {
            let (dy, dx) = (r as f64 - cy, c as f64 - cx);
            dy * dy + dx * dx <= rad * rad
        });
        if hit {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// Maps stored labels to printable class tags.
pub fn class_tag(label: Option<i16>) -> String {
    match label {
        None => "-".to_string(),
        Some(l @ 0..=9) => l.to_string(),
        Some(l @ 97..=122) => ((l as u8) as char).to_string(),
        Some(l) => format!("#{l}"),
    }
}
