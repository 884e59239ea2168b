/// Golden angle in turns, spaces the hues of slots beyond the third.
const GOLDEN_TURN: f64 = 0.381_966_011_250_105_1;

pub const BLACK: [f64; 3] = [0.0, 0.0, 0.0];
pub const WHITE: [f64; 3] = [1.0, 1.0, 1.0];
pub const YELLOW: [f64; 3] = [1.0, 1.0, 0.0];

/// Basin colors with iteration-dependent brightness.
///
/// Slot 0 is orange with `c = (M - 1.5 it)/M`, slot 1 blue with
/// `c = (M - 2 it)/M`, slot 2 green with `c = (M - it)/M`; later slots use
/// `c = (M - it)/M` on hues a golden angle apart. `c` is clamped to `[0, 1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BasinPalette;

impl BasinPalette {
    pub fn color(&self, slot: usize, it: usize, maxiter: usize) -> [f64; 3] {
        let m = maxiter.max(1) as f64;
        let it = it as f64;
        let bright = |rate: f64| ((m - rate * it) / m).clamp(0.0, 1.0);
        match slot {
            0 => {
                let c = bright(1.5);
                [c, c * 102.0 / 255.0, 0.0]
            }
            1 => {
                let c = bright(2.0);
                [c * 40.0 / 255.0, c * 80.0 / 255.0, c]
            }
            2 => {
                let c = bright(1.0);
                [c * 41.0 / 255.0, c * 230.0 / 255.0, c * 56.0 / 255.0]
            }
            s => {
                let c = bright(1.0);
                let hue = (0.75 + (s - 3) as f64 * GOLDEN_TURN).fract();
                hsv(hue, 0.75, 1.0).map(|v| v * c)
            }
        }
    }
}

fn hsv(h: f64, s: f64, v: f64) -> [f64; 3] {
    let h6 = h * 6.0;
    let sector = h6.floor() as i32 % 6;
    let f = h6 - h6.floor();
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - s * f), v * (1.0 - s * (1.0 - f)));
    match sector {
        0 => [v, t, p],
        1 => [q, v, p],
        2 => [p, v, t],
        3 => [p, q, v],
        4 => [t, p, v],
        _ => [v, p, q],
    }
}
