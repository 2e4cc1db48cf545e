/// Prose output settings. Colour is off unless `CPS_COLOR=1`, and never
/// applies to JSON.
pub struct Style {
    pub human: bool,
    color: bool,
}

impl Style {
    pub fn from_env(human: bool) -> Self {
        let color = human && std::env::var("CPS_COLOR").is_ok_and(|v| v == "1");
        Style { human, color }
    }

    fn paint(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    pub fn good(&self, s: &str) -> String {
        self.paint("32", s)
    }

    pub fn bad(&self, s: &str) -> String {
        self.paint("31", s)
    }
}
