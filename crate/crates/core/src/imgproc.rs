//! Pixel-level image operations shared by preprocessing and augmentation.

use crate::mat::Mat;
use crate::Grid;

/// Bilinear resize to `(out_h, out_w)` using half-pixel centers.
pub fn resize_bilinear(src: &Grid, out_h: usize, out_w: usize) -> Grid {
    let (h, w) = (src.rows(), src.cols());
    if h == out_h && w == out_w {
        return src.clone();
    }
    let scale_y = h as f32 / out_h as f32;
    let scale_x = w as f32 / out_w as f32;
    Mat::from_fn(out_h, out_w, |r, c| {
        let sy = ((r as f32 + 0.5) * scale_y - 0.5).clamp(0.0, (h - 1) as f32);
        let sx = ((c as f32 + 0.5) * scale_x - 0.5).clamp(0.0, (w - 1) as f32);
        let y0 = sy.floor() as usize;
        let x0 = sx.floor() as usize;
        let y1 = (y0 + 1).min(h - 1);
        let x1 = (x0 + 1).min(w - 1);
        let fy = sy - y0 as f32;
        let fx = sx - x0 as f32;
        let top = src.get(y0, x0) * (1.0 - fx) + src.get(y0, x1) * fx;
        let bot = src.get(y1, x0) * (1.0 - fx) + src.get(y1, x1) * fx;
        top * (1.0 - fy) + bot * fy
    })
}

/// Copy the `height x width` region whose top-left corner is `(top, left)`.
pub fn crop(src: &Grid, top: usize, left: usize, height: usize, width: usize) -> Grid {
    assert!(top + height <= src.rows() && left + width <= src.cols());
    Mat::from_fn(height, width, |r, c| src.get(top + r, left + c))
}

pub fn flip_horizontal(src: &Grid) -> Grid {
    let w = src.cols();
    Mat::from_fn(src.rows(), w, |r, c| src.get(r, w - 1 - c))
}

/// Separable gaussian blur; kernel radius is `ceil(2 sigma)`.
pub fn gaussian_blur(src: &Grid, sigma: f32) -> Grid {
    if sigma <= 0.0 {
        return src.clone();
    }
    let radius = (2.0 * sigma).ceil() as isize;
    let mut kernel = Vec::with_capacity((2 * radius + 1) as usize);
    let denom = 2.0 * sigma * sigma;
    for i in -radius..=radius {
        kernel.push((-(i * i) as f32 / denom).exp());
    }
    let sum: f32 = kernel.iter().sum();
    for k in kernel.iter_mut() {
        *k /= sum;
    }

    let (h, w) = (src.rows() as isize, src.cols() as isize);
    let horizontal = Mat::from_fn(src.rows(), src.cols(), |r, c| {
        let mut acc = 0.0;
        for (ki, &k) in kernel.iter().enumerate() {
            let x = (c as isize + ki as isize - radius).clamp(0, w - 1);
            acc += k * src.get(r, x as usize);
        }
        acc
    });
    Mat::from_fn(src.rows(), src.cols(), |r, c| {
        let mut acc = 0.0;
        for (ki, &k) in kernel.iter().enumerate() {
            let y = (r as isize + ki as isize - radius).clamp(0, h - 1);
            acc += k * horizontal.get(y as usize, c);
        }
        acc
    })
}

/// Rotate around the image center by `degrees`, bilinear sampling,
/// out-of-bounds filled with `fill`.
pub fn rotate_bilinear(src: &Grid, degrees: f32, fill: f32) -> Grid {
    let (h, w) = (src.rows(), src.cols());
    let theta = degrees.to_radians();
    let (sin_t, cos_t) = theta.sin_cos();
    let cy = (h as f32 - 1.0) / 2.0;
    let cx = (w as f32 - 1.0) / 2.0;
    Mat::from_fn(h, w, |r, c| {
        // inverse-rotate the destination pixel into source coordinates
        let dy = r as f32 - cy;
        let dx = c as f32 - cx;
        let sy = cy + dy * cos_t + dx * sin_t;
        let sx = cx - dy * sin_t + dx * cos_t;
        if sy < 0.0 || sx < 0.0 || sy > (h - 1) as f32 || sx > (w - 1) as f32 {
            return fill;
        }
        let y0 = sy.floor() as usize;
        let x0 = sx.floor() as usize;
        let y1 = (y0 + 1).min(h - 1);
        let x1 = (x0 + 1).min(w - 1);
        let fy = sy - y0 as f32;
        let fx = sx - x0 as f32;
        let top = src.get(y0, x0) * (1.0 - fx) + src.get(y0, x1) * fx;
        let bot = src.get(y1, x0) * (1.0 - fx) + src.get(y1, x1) * fx;
        top * (1.0 - fy) + bot * fy
    })
}

/// Brightness shift then contrast scale around 0.5, clamped to [0,1].
pub fn brightness_contrast(src: &Grid, brightness: f32, contrast: f32) -> Grid {
    src.map(|v| (((v + brightness) - 0.5) * contrast + 0.5).clamp(0.0, 1.0))
}

/// Invert intensities above the threshold.
pub fn solarize(src: &Grid, threshold: f32) -> Grid {
    src.map(|v| if v > threshold { 1.0 - v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resize_identity_when_same_size() {
        let img = Mat::from_fn(8, 8, |r, c| (r * 8 + c) as f32 / 64.0);
        assert_eq!(resize_bilinear(&img, 8, 8), img);
    }

    #[test]
    fn resize_halves_constant_image_exactly() {
        let img: Grid = Mat::full(16, 16, 0.3);
        let out = resize_bilinear(&img, 8, 8);
        assert!(out.data().iter().all(|&v| (v - 0.3).abs() < 1e-6));
    }

    #[test]
    fn flip_is_involution() {
        let img = Mat::from_fn(5, 7, |r, c| (r as f32 * 0.3 + c as f32 * 0.11).sin());
        assert_eq!(flip_horizontal(&flip_horizontal(&img)), img);
    }

    #[test]
    fn blur_preserves_constant() {
        let img: Grid = Mat::full(9, 9, 0.42);
        let out = gaussian_blur(&img, 1.3);
        assert!(out.data().iter().all(|&v| (v - 0.42).abs() < 1e-5));
    }

    #[test]
    fn rotate_zero_is_identity() {
        let img = Mat::from_fn(6, 6, |r, c| (r * 6 + c) as f32 / 36.0);
        let out = rotate_bilinear(&img, 0.0, 0.0);
        for (a, b) in out.data().iter().zip(img.data().iter()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn solarize_inverts_above_threshold() {
        let img = Mat::from_vec(1, 3, vec![0.2, 0.5, 0.9]);
        let out = solarize(&img, 0.5);
        assert_eq!(out.data(), &[0.2, 0.5, 0.100000024]);
    }
}
