use std::collections::BTreeMap;

use rug::{Float, Rational};

use super::expr::{evaluate, Value};
use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;

/// Parameter name to expression text.
pub type ParamMap = BTreeMap<String, String>;

/// Parse `k=v` pairs as given on the command line.
pub fn parse_assignments<S: AsRef<str>>(items: &[S]) -> Result<ParamMap> {
    let mut out = ParamMap::new();
    for item in items {
        let item = item.as_ref();
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::param(item, "expected key=value"))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::param(item, "empty key"));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Resolved parameters of one quantity or case.
#[derive(Debug, Clone, Default)]
pub struct Args {
    values: ParamMap,
}

impl Args {
    /// Overlay `overrides` on `defaults`; every key must be in `allowed`.
    pub fn resolve(defaults: &ParamMap, overrides: &ParamMap, allowed: &[&str]) -> Result<Self> {
        for k in overrides.keys() {
            if !allowed.contains(&k.as_str()) {
                let expected = if allowed.is_empty() {
                    "no parameters are accepted".to_string()
                } else {
                    format!("expected one of {}", allowed.join(", "))
                };
                return Err(Error::param(k, format!("unknown parameter; {expected}")));
            }
        }
        let mut values = defaults.clone();
        values.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
        Ok(Self { values })
    }

    pub fn from_map(values: ParamMap) -> Self {
        Self { values }
    }

    /// Evaluate every entry once so malformed input fails before any work.
    pub fn validate(&self, ctx: &PrecisionContext) -> Result<()> {
        for (k, v) in &self.values {
            evaluate(k, v, ctx)?;
        }
        Ok(())
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn map(&self) -> &ParamMap {
        &self.values
    }

    fn value(&self, key: &str, ctx: &PrecisionContext) -> Result<Value> {
        let src = self
            .values
            .get(key)
            .ok_or_else(|| Error::param(key, "missing"))?;
        evaluate(key, src, ctx)
    }

    pub fn real(&self, key: &str, ctx: &PrecisionContext) -> Result<Float> {
        Ok(self.value(key, ctx)?.to_float(ctx))
    }

    pub fn rational(&self, key: &str, ctx: &PrecisionContext) -> Result<Rational> {
        match self.value(key, ctx)? {
            Value::Exact(r) => Ok(r),
            Value::Real(_) => Err(Error::param(key, "must be an exact rational")),
        }
    }

    pub fn unsigned(&self, key: &str, ctx: &PrecisionContext) -> Result<u64> {
        let r = self.rational(key, ctx)?;
        if *r.denom() != 1 {
            return Err(Error::param(key, "must be an integer"));
        }
        r.numer().to_u64().ok_or_else(|| Error::param(key, "must be a non-negative integer"))
    }

    /// `q` when given, otherwise `e^{−x}`.
    pub fn nome(&self, ctx: &PrecisionContext) -> Result<Float> {
        if self.has("q") {
            return self.real("q", ctx);
        }
        if self.has("x") {
            return Ok((-self.real("x", ctx)?).exp());
        }
        Err(Error::param("q", "missing (give q or x with q = exp(-x))"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignments() {
        let m = parse_assignments(&["q=0.1", " c = 1/2 "]).unwrap();
        assert_eq!(m["q"], "0.1");
        assert_eq!(m["c"], "1/2");
        assert!(parse_assignments(&["q"]).is_err());
        assert!(parse_assignments(&["=1"]).is_err());
    }

    #[test]
    fn overrides_and_nome() {
        let ctx = PrecisionContext::new(128).unwrap();
        let defaults = parse_assignments(&["q=0.5"]).unwrap();
        let over = parse_assignments(&["q=0.25"]).unwrap();
        let args = Args::resolve(&defaults, &over, &["q", "x"]).unwrap();
        assert_eq!(args.nome(&ctx).unwrap(), 0.25);
        let args = Args::resolve(&ParamMap::new(), &parse_assignments(&["x=0"]).unwrap(), &["q", "x"]).unwrap();
        assert_eq!(args.nome(&ctx).unwrap(), 1);
        let bad = Args::resolve(&defaults, &parse_assignments(&["z=1"]).unwrap(), &["q"]);
        assert!(matches!(bad, Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn exactness_required() {
        let ctx = PrecisionContext::new(128).unwrap();
        let args = Args::from_map(parse_assignments(&["r=pi", "a=3", "h=1/2"]).unwrap());
        assert!(args.rational("r", &ctx).is_err());
        assert_eq!(args.unsigned("a", &ctx).unwrap(), 3);
        assert!(args.unsigned("h", &ctx).is_err());
    }
}
