use serde::{Deserialize, Serialize};

/// Operating mode of the load-alleviation layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    #[default]
    Normal,
    ShortTermDerate,
    LongTermDerate,
}

impl ControlMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Normal => "normal",
            Self::ShortTermDerate => "short_term_derate",
            Self::LongTermDerate => "long_term_derate",
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Actuator demands for one controller interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlCommand {
    /// Generator torque demand on the high-speed side, N m.
    pub gen_torque: f64,
    /// Collective pitch demand, rad.
    pub pitch: f64,
    /// Power set-point fraction.
    pub p_sp: f64,
    pub mode: ControlMode,
}

impl ControlCommand {
    pub fn hold(gen_torque: f64, pitch: f64) -> Self {
        Self {
            gen_torque,
            pitch,
            p_sp: 1.0,
            mode: ControlMode::Normal,
        }
    }
}
