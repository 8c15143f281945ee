//! Keyed `key=value` reports with stable field names.

use std::fmt::{self, Display};

/// A structured result: command, input hashes, ordered fields, optional timings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    command: String,
    inputs: Vec<(String, String)>,
    fields: Vec<(String, String)>,
    timings: Vec<(String, f64)>,
}

/// Types that can append their fields to a report.
pub trait Reportable {
    fn write_to(&self, r: &mut Report);
}

/// Formats a slice as `[a,b,c]`.
pub fn list<T: Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), ..Report::default() }
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    pub fn input(&mut self, name: &str, digest: &str) -> &mut Self {
        self.inputs.push((name.to_string(), digest.to_string()));
        self
    }

    /// Appends a field; a repeated key replaces the earlier value in place.
    pub fn field(&mut self, key: &str, value: impl Display) -> &mut Self {
        let value = value.to_string();
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
        self
    }

    pub fn list<T: Display>(&mut self, key: &str, items: &[T]) -> &mut Self {
        self.field(key, list(items))
    }

    pub fn timing(&mut self, key: &str, seconds: f64) -> &mut Self {
        self.timings.push((key.to_string(), seconds));
        self
    }

    pub fn extend(&mut self, item: &impl Reportable) -> &mut Self {
        item.write_to(self);
        self
    }

    /// Copies every field of `other` under `prefix.`.
    pub fn nest(&mut self, prefix: &str, other: &Report) -> &mut Self {
        for (k, v) in &other.fields {
            self.field(&format!("{prefix}.{k}"), v);
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_bool(&self, key: &str) -> Option<bool> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn render(&self, with_timings: bool) -> String {
        let mut out = format!("# cext {}\n", self.command);
        for (k, v) in &self.inputs {
            out.push_str(&format!("input.{k}={v}\n"));
        }
        for (k, v) in &self.fields {
            out.push_str(&format!("{k}={v}\n"));
        }
        if with_timings {
            for (k, s) in &self.timings {
                out.push_str(&format!("time.{k}={s:.3}\n"));
            }
        }
        out
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}
