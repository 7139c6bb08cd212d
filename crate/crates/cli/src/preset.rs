use crate::config::Settings;

pub struct Preset {
    pub name: &'static str,
    pub about: &'static str,
    pub values: &'static [(&'static str, &'static str)],
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig-csla-distill",
        about: "convex-split distillation: fidelity over (n, r) for F(rho) = 0.6, 0.52",
        values: &[
            ("protocol", "csla"),
            ("task", "distill"),
            ("d", "2"),
            ("n", "2..50"),
            ("rounds", "1..20"),
            ("epsilon", "0.05"),
            ("f_rho", "0.6,0.52"),
            ("f_tau", "0.8"),
        ],
    },
    Preset {
        name: "fig-csla-teleport",
        about: "convex-split teleportation: average fidelity over (n, r) for F(rho) = 0.6, 0.52",
        values: &[
            ("protocol", "csla"),
            ("task", "teleport"),
            ("d", "2"),
            ("n", "2..50"),
            ("rounds", "1..20"),
            ("epsilon", "0.05"),
            ("f_rho", "0.6,0.52"),
            ("f_tau", "0.8"),
        ],
    },
    Preset {
        name: "fig-esa-distill",
        about: "embezzling distillation: fidelity over r for d = 2..5 at M = 1000",
        values: &[
            ("protocol", "esa"),
            ("task", "distill"),
            ("d", "2..5"),
            ("m", "1000"),
            ("rounds", "1..20"),
            ("epsilon", "0.05"),
            ("f_rho", "0.7,0.8"),
        ],
    },
    Preset {
        name: "fig-esa-teleport",
        about: "embezzling teleportation: reuse rounds over a log-spaced M sweep at d = 2",
        values: &[
            ("protocol", "esa"),
            ("task", "teleport"),
            ("d", "2"),
            ("m", "10..1000000@100"),
            ("rounds", "1..25"),
            ("epsilon", "0.05"),
            ("f_rho", "0.7,0.8"),
        ],
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::new();
        for (k, v) in self.values {
            s.set(k, *v).expect("preset keys are valid");
        }
        s
    }
}
