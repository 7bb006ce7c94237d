//! On-body and off-body channel models.
//!
//! On-body links are dominated by creeping waves diffracted around the body
//! surface; the field at the receiver is the sum of the short-way and the
//! long-way contribution around the surface, each attenuated by a decay
//! function of path length, surface curvature, and antenna heights.
//! Off-body attacker paths use free-space loss. All outputs are RSS in dB
//! and all functions are pure.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum wave impedance, ohms.
pub const VACUUM_IMPEDANCE_OHM: f64 = 376.730_313_668;

/// Geometry of the body surface carrying an on-body link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyGeometry {
    /// Radius of the body surface, m.
    pub surface_radius_m: f64,
    /// Relative complex permittivity of tissue (real, imag). Exposed for
    /// completeness; the parameterized decay below subsumes tissue losses.
    pub permittivity: (f64, f64),
    /// Height of the transmit antenna above the skin, m.
    pub antenna_height_tx_m: f64,
    /// Height of the receive antenna above the skin, m.
    pub antenna_height_rx_m: f64,
}

impl BodyGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.surface_radius_m > 0.0) {
            return Err(Error::invalid_argument("surface_radius_m must be > 0"));
        }
        for (name, h) in [
            ("antenna_height_tx_m", self.antenna_height_tx_m),
            ("antenna_height_rx_m", self.antenna_height_rx_m),
        ] {
            if !(0.0..=0.02).contains(&h) {
                return Err(Error::invalid_argument(format!(
                    "{name} must be within [0, 0.02] m, got {h}"
                )));
            }
        }
        if self.permittivity.0 < 1.0 {
            return Err(Error::invalid_argument(
                "real part of permittivity must be >= 1",
            ));
        }
        Ok(())
    }
}

impl Default for BodyGeometry {
    fn default() -> Self {
        // Torso-scale surface with wearable antennas on 1.5 cm standoffs.
        Self {
            surface_radius_m: 0.15,
            permittivity: (50.0, 15.0),
            antenna_height_tx_m: 0.015,
            antenna_height_rx_m: 0.015,
        }
    }
}

/// Transmit-side parameters of a single radio link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Transmit power, W.
    pub tx_power_w: f64,
    /// Transmit antenna gain, linear.
    pub tx_gain: f64,
    /// Receive antenna gain, linear.
    pub rx_gain: f64,
    /// Along-surface (on-body) or line-of-sight (off-body) distance, m.
    pub distance_m: f64,
    /// Carrier frequency, Hz.
    pub frequency_hz: f64,
    /// Free-space wavenumber 2*pi*f/c, 1/m. Derived in [`LinkParams::new`].
    pub wavenumber: f64,
    /// Vacuum wave impedance, ohms.
    pub vacuum_impedance_ohm: f64,
}

impl LinkParams {
    pub fn new(
        tx_power_w: f64,
        tx_gain: f64,
        rx_gain: f64,
        distance_m: f64,
        frequency_hz: f64,
    ) -> Result<Self> {
        let p = Self {
            tx_power_w,
            tx_gain,
            rx_gain,
            distance_m,
            frequency_hz,
            wavenumber: 2.0 * PI * frequency_hz / SPEED_OF_LIGHT,
            vacuum_impedance_ohm: VACUUM_IMPEDANCE_OHM,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tx_power_w > 0.0) {
            return Err(Error::invalid_argument("tx_power_w must be > 0"));
        }
        if !(self.distance_m > 0.0) {
            return Err(Error::invalid_argument("distance_m must be > 0"));
        }
        if !(self.frequency_hz > 0.0) {
            return Err(Error::invalid_argument("frequency_hz must be > 0"));
        }
        let expected = 2.0 * PI * self.frequency_hz / SPEED_OF_LIGHT;
        if ((self.wavenumber - expected) / expected).abs() > 1e-9 {
            return Err(Error::invalid_argument(format!(
                "wavenumber {} inconsistent with frequency {} Hz",
                self.wavenumber, self.frequency_hz
            )));
        }
        Ok(())
    }
}

/// Parameters of the creeping-wave decay function.
///
/// The decay is exp(-gamma * d) with
/// gamma = base * (1 + curvature_coeff / r) / (1 + height_coeff * (h_t + h_r)),
/// so tighter curvature decays faster and antenna standoff relieves the loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttenuationParams {
    /// Base decay rate, nepers per meter.
    pub base_decay_per_m: f64,
    /// Dimensionless scaling of decay with 1/r.
    pub curvature_coeff: f64,
    /// Dimensionless scaling of decay relief with (h_t + h_r).
    pub height_coeff: f64,
}

impl AttenuationParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("base_decay_per_m", self.base_decay_per_m),
            ("curvature_coeff", self.curvature_coeff),
            ("height_coeff", self.height_coeff),
        ] {
            if !(v >= 0.0) {
                return Err(Error::invalid_argument(format!("{name} must be >= 0")));
            }
        }
        Ok(())
    }
}

impl Default for AttenuationParams {
    fn default() -> Self {
        Self {
            base_decay_per_m: 5.0,
            curvature_coeff: 0.05,
            height_coeff: 10.0,
        }
    }
}

/// Creeping-wave attenuation factor over one path, in (0, 1].
pub fn attenuation_w(distance_m: f64, body: &BodyGeometry, params: &AttenuationParams) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::invalid_argument(format!(
            "attenuation distance must be > 0, got {distance_m}"
        )));
    }
    body.validate()?;
    params.validate()?;
    let gamma = params.base_decay_per_m * (1.0 + params.curvature_coeff / body.surface_radius_m)
        / (1.0 + params.height_coeff * (body.antenna_height_tx_m + body.antenna_height_rx_m));
    Ok((-gamma * distance_m).exp())
}

/// Complex electric field at the receiver of an on-body creeping link, V/m.
///
/// Sum of the short-way term over `d` and the long-way term over
/// `2*pi*r - d`, each sqrt(eta/2pi) * sqrt(Pt*Gt)/path * exp(-jk*path) * W(path).
pub fn creeping_field(
    link: &LinkParams,
    body: &BodyGeometry,
    att: &AttenuationParams,
) -> Result<Complex64> {
    link.validate()?;
    body.validate()?;
    let circumference = 2.0 * PI * body.surface_radius_m;
    if link.distance_m >= circumference {
        return Err(Error::invalid_argument(format!(
            "on-body distance {} m must be below the surface circumference {:.4} m",
            link.distance_m, circumference
        )));
    }
    let amp = (link.vacuum_impedance_ohm / (2.0 * PI)).sqrt()
        * (link.tx_power_w * link.tx_gain).sqrt();
    let mut field = Complex64::new(0.0, 0.0);
    for path in [link.distance_m, circumference - link.distance_m] {
        let w = attenuation_w(path, body, att)?;
        let phase = Complex64::new(0.0, -link.wavenumber * path).exp();
        field += phase * (amp / path * w);
    }
    Ok(field)
}

/// On-body RSS in dB: field magnitude in dB plus receive gain and the
/// current movement offset of the transmitter.
pub fn on_body_rss_db(
    link: &LinkParams,
    body: &BodyGeometry,
    att: &AttenuationParams,
    movement_offset_db: f64,
) -> Result<f64> {
    let field = creeping_field(link, body, att)?;
    Ok(20.0 * field.norm().log10() + 10.0 * link.rx_gain.log10() + movement_offset_db)
}

/// Free-space (Friis) RSS in dB for an off-body line-of-sight path.
pub fn free_space_rss_db(
    distance_m: f64,
    frequency_hz: f64,
    tx_power_w: f64,
    tx_gain: f64,
    rx_gain: f64,
) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::invalid_argument("distance_m must be > 0"));
    }
    if !(frequency_hz > 0.0) {
        return Err(Error::invalid_argument("frequency_hz must be > 0"));
    }
    if !(tx_power_w > 0.0) || !(tx_gain > 0.0) || !(rx_gain > 0.0) {
        return Err(Error::invalid_argument("powers and gains must be > 0"));
    }
    let wavelength = SPEED_OF_LIGHT / frequency_hz;
    Ok(10.0 * (tx_power_w * tx_gain * rx_gain).log10()
        + 20.0 * (wavelength / (4.0 * PI * distance_m)).log10())
}

/// Floor applied to |cos(angle)| so the penalty stays finite near 90 deg.
pub const POLARIZATION_FLOOR: f64 = 0.01;

/// Linear-polarization mismatch penalty in dB (<= 0), cosine law with a
/// -40 dB floor. Symmetric about 90 deg; 0 dB at 0 and 180 deg.
pub fn polarization_penalty_db(angle_deg: f64) -> Result<f64> {
    if !(0.0..=180.0).contains(&angle_deg) {
        return Err(Error::invalid_argument(format!(
            "polarization angle must be within [0, 180] deg, got {angle_deg}"
        )));
    }
    let c = angle_deg.to_radians().cos().abs().max(POLARIZATION_FLOOR);
    Ok(20.0 * c.log10())
}

/// Extra RSS jitter (standard deviation, dB) an off-body emitter picks up
/// from body-coupled multipath as it closes in on the user. Logistic roll-off:
/// >= 2 dB inside 0.3 m, <= 0.5 dB beyond 0.5 m, essentially zero past 1 m.
pub fn proximity_coupling_std_db(attacker_distance_m: f64) -> Result<f64> {
    if !(attacker_distance_m > 0.0) {
        return Err(Error::invalid_argument("attacker_distance_m must be > 0"));
    }
    let (sigma0, midpoint_m, scale_m) = (3.0, 0.35, 0.05);
    Ok(sigma0 / (1.0 + ((attacker_distance_m - midpoint_m) / scale_m).exp()))
}
