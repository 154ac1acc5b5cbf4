//! Named experiments and their default settings.

use crate::config::Model;

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub model: Model,
    pub test: &'static str,
    /// Accepted schemes; the first is the default.
    pub schemes: &'static [&'static str],
    /// Defaults as config text pairs, applied before the user's keys.
    pub defaults: &'static [(&'static str, &'static str)],
    pub summary: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        model: Model::Fp,
        test: "two_gaussians",
        schemes: &["rec", "reu", "su", "sc", "cc"],
        defaults: &[
            ("n_cells", "100"),
            ("dt", "1.5e-4"),
            ("t_end", "8"),
            ("sample_every", "0.1"),
            ("stepper", "forward_euler"),
        ],
        summary: "linear Fokker-Planck on [-5, 5], two Gaussians relaxing to the Maxwellian",
    },
    Preset {
        model: Model::Pme,
        test: "gaussian_ring",
        schemes: &["reu", "su"],
        defaults: &[
            ("n_cells", "64"),
            ("t_end", "20"),
            ("sample_every", "0.5"),
            ("stepper", "forward_euler"),
        ],
        summary: "porous medium (m = 5) on [-10, 10]^2, ring |x|^2 exp(-|x|^2/2) relaxing to Barenblatt",
    },
    Preset {
        model: Model::Boltzmann,
        test: "bkw",
        schemes: &["refs", "fs", "tdr"],
        defaults: &[
            ("n_cells", "32"),
            ("dt", "0.01"),
            ("t_end", "10"),
            ("sample_every", "0.1"),
            ("stepper", "forward_euler"),
        ],
        summary: "2D Maxwell molecules, spectral on [-8, 8]^2 with 8 angles, BKW exact solution",
    },
    Preset {
        model: Model::Swe,
        test: "lake",
        schemes: &["relf", "lf", "fl-relf"],
        defaults: &[
            ("n_cells", "200"),
            ("t_end", "1"),
            ("sample_every", "0.05"),
            ("stepper", "ssp_rk2"),
        ],
        summary: "lake at rest on [0, 1] with a bump, surface raised by 0.1 on (0.1, 0.2)",
    },
    Preset {
        model: Model::Swe,
        test: "transcritical",
        schemes: &["relf", "lf", "fl-relf"],
        defaults: &[
            ("n_cells", "200"),
            ("t_end", "500"),
            ("sample_every", "5"),
            ("stepper", "ssp_rk2"),
        ],
        summary: "transcritical flow with a shock over the bump on [0, 25], q = 0.18, h_out = 0.33",
    },
    Preset {
        model: Model::Advect,
        test: "equilibrium",
        schemes: &["fl", "re", "tvd2"],
        defaults: &[
            ("n_cells", "100"),
            ("t_end", "10"),
            ("sample_every", "0.1"),
            ("stepper", "forward_euler"),
        ],
        summary: "advection with relaxation on [0, 5], empty domain filled from the inflow u_B = 1",
    },
    Preset {
        model: Model::Advect,
        test: "tvd-sweep",
        schemes: &["fl", "adversarial"],
        defaults: &[("n_cells", "100"), ("seed", "2024")],
        summary: "total variation check of the limited scheme over step, ramp and random data",
    },
];

pub fn find(model: Model, test: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.model == model && p.test == test)
}
