use super::{
    make_b2, make_cyclic, make_dc, make_homocyclic, make_mc, make_partb_decomposable, make_partb_indecomposable,
    make_second_example,
};
use crate::error::{Error, Result};
use crate::group::{direct_product, Group, GroupElement};
use crate::Limits;
use serde_json::{json, Map, Value};
use std::fmt;

/// Declarative recipe for a group: a family with parameters, or an operator
/// applied to sub-recipes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDescription {
    Mc {
        p: u64,
        c: u32,
    },
    Dc {
        p: u64,
        c: u32,
    },
    Cyclic {
        p: u64,
        e: u32,
    },
    Homocyclic {
        p: u64,
        k: u32,
        e: u32,
        s: u32,
    },
    B2 {
        p: u64,
        k: u32,
    },
    SecondExample {
        p: u64,
        k: u32,
        c: u32,
    },
    Partb {
        p: u64,
        cs: Vec<u32>,
        c: u32,
        indecomposable: bool,
    },
    Product(Vec<GroupDescription>),
    /// Quotient by the subgroup generated by a central element of order p,
    /// given as a word in the named elements.
    CentralQuotient {
        group: Box<GroupDescription>,
        word: String,
    },
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

struct Fields<'a> {
    obj: &'a Map<String, Value>,
    kind: &'a str,
    used: Vec<&'static str>,
}

impl<'a> Fields<'a> {
    fn value(&mut self, key: &'static str) -> Result<&'a Value> {
        self.used.push(key);
        self.obj.get(key).ok_or_else(|| parse_err(format!("{}: missing field \"{key}\"", self.kind)))
    }

    fn uint(&mut self, key: &'static str) -> Result<u64> {
        let kind = self.kind;
        self.value(key)?
            .as_u64()
            .ok_or_else(|| parse_err(format!("{kind}: field \"{key}\" must be a non-negative integer")))
    }

    fn small(&mut self, key: &'static str) -> Result<u32> {
        let kind = self.kind;
        u32::try_from(self.uint(key)?).map_err(|_| parse_err(format!("{kind}: field \"{key}\" is too large")))
    }

    fn finish(self) -> Result<()> {
        for key in self.obj.keys() {
            if key != "family" && key != "op" && !self.used.contains(&key.as_str()) {
                return Err(parse_err(format!("{}: unknown field \"{key}\"", self.kind)));
            }
        }
        Ok(())
    }
}

impl GroupDescription {
    /// Parses a UTF-8 JSON recipe. Syntax errors report line and column.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| parse_err("recipe must be a JSON object"))?;
        let kind = match (obj.get("family"), obj.get("op")) {
            (Some(Value::String(s)), None) | (None, Some(Value::String(s))) => s.as_str(),
            (Some(_), Some(_)) => return Err(parse_err("recipe has both \"family\" and \"op\"")),
            _ => return Err(parse_err("recipe needs a string \"family\" or \"op\"")),
        };
        let mut f = Fields { obj, kind, used: Vec::new() };
        let desc = match kind {
            "Mc" => Self::Mc { p: f.uint("p")?, c: f.small("c")? },
            "Dc" => Self::Dc { p: f.uint("p")?, c: f.small("c")? },
            "cyclic" => Self::Cyclic { p: f.uint("p")?, e: f.small("e")? },
            "homocyclic" => Self::Homocyclic { p: f.uint("p")?, k: f.small("k")?, e: f.small("e")?, s: f.small("s")? },
            "B2" => Self::B2 { p: f.uint("p")?, k: f.small("k")? },
            "second_example" => Self::SecondExample { p: f.uint("p")?, k: f.small("k")?, c: f.small("c")? },
            "partb" | "partb_indec" => {
                let p = f.uint("p")?;
                let cs = f
                    .value("cs")?
                    .as_array()
                    .ok_or_else(|| parse_err(format!("{kind}: \"cs\" must be an array")))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .and_then(|x| u32::try_from(x).ok())
                            .ok_or_else(|| parse_err(format!("{kind}: \"cs\" entries must be small integers")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let c = f.small("c")?;
                let indecomposable = if kind == "partb_indec" {
                    true
                } else if obj.contains_key("indecomposable") {
                    f.value("indecomposable")?
                        .as_bool()
                        .ok_or_else(|| parse_err("partb: \"indecomposable\" must be a boolean"))?
                } else {
                    false
                };
                Self::Partb { p, cs, c, indecomposable }
            }
            "product" => {
                let factors = f
                    .value("factors")?
                    .as_array()
                    .ok_or_else(|| parse_err("product: \"factors\" must be an array"))?
                    .iter()
                    .map(Self::from_value)
                    .collect::<Result<Vec<_>>>()?;
                if factors.is_empty() {
                    return Err(parse_err("product: \"factors\" must be non-empty"));
                }
                Self::Product(factors)
            }
            "central_quotient" => {
                let group = Box::new(Self::from_value(f.value("group")?)?);
                let word = f
                    .value("word")?
                    .as_str()
                    .ok_or_else(|| parse_err("central_quotient: \"word\" must be a string"))?
                    .to_string();
                parse_word(&word)?;
                Self::CentralQuotient { group, word }
            }
            other => return Err(parse_err(format!("unknown family \"{other}\""))),
        };
        f.finish()?;
        Ok(desc)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Mc { p, c } => json!({"family": "Mc", "p": p, "c": c}),
            Self::Dc { p, c } => json!({"family": "Dc", "p": p, "c": c}),
            Self::Cyclic { p, e } => json!({"family": "cyclic", "p": p, "e": e}),
            Self::Homocyclic { p, k, e, s } => json!({"family": "homocyclic", "p": p, "k": k, "e": e, "s": s}),
            Self::B2 { p, k } => json!({"family": "B2", "p": p, "k": k}),
            Self::SecondExample { p, k, c } => json!({"family": "second_example", "p": p, "k": k, "c": c}),
            Self::Partb { p, cs, c, indecomposable } => {
                json!({"family": "partb", "p": p, "cs": cs, "c": c, "indecomposable": indecomposable})
            }
            Self::Product(fs) => json!({"op": "product", "factors": fs.iter().map(Self::to_json).collect::<Vec<_>>()}),
            Self::CentralQuotient { group, word } => {
                json!({"op": "central_quotient", "group": group.to_json(), "word": word})
            }
        }
    }

    pub fn build(&self, lim: &Limits) -> Result<Group> {
        match self {
            &Self::Mc { p, c } => make_mc(p, c, lim),
            &Self::Dc { p, c } => make_dc(p, c, lim),
            &Self::Cyclic { p, e } => make_cyclic(p, e, lim),
            &Self::Homocyclic { p, k, e, s } => make_homocyclic(p, k, e, s, lim),
            &Self::B2 { p, k } => make_b2(p, k, lim),
            &Self::SecondExample { p, k, c } => make_second_example(p, k, c, lim),
            Self::Partb { p, cs, c, indecomposable: false } => make_partb_decomposable(*p, cs, *c, lim),
            Self::Partb { p, cs, c, indecomposable: true } => make_partb_indecomposable(*p, cs, *c, lim),
            Self::Product(fs) => {
                let gs = fs.iter().map(|f| f.build(lim)).collect::<Result<Vec<_>>>()?;
                direct_product(&gs)
            }
            Self::CentralQuotient { group, word } => {
                let g = group.build(lim)?;
                let z = evaluate_word(&g, word)?;
                if !g.contains(&z)? {
                    return Err(Error::NotInGroup);
                }
                if !g.is_central(&z) {
                    return Err(Error::NotCentral);
                }
                let o = g.element_order(&z);
                if o != g.prime() {
                    return Err(Error::WrongOrder(o));
                }
                let n = g.closure(&[z])?;
                g.quotient(&n)
            }
        }
    }
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mc { p, c } => write!(f, "Mc({p},{c})"),
            Self::Dc { p, c } => write!(f, "Dc({p},{c})"),
            Self::Cyclic { p, e } => write!(f, "C({p}^{e})"),
            Self::Homocyclic { p, k, e, s } => write!(f, "homocyclic({p},{k},{e},{s})"),
            Self::B2 { p, k } => write!(f, "B2({p},{k})"),
            Self::SecondExample { p, k, c } => write!(f, "second_example({p},{k},{c})"),
            Self::Partb { p, cs, c, indecomposable } => {
                let cs: Vec<String> = cs.iter().map(u32::to_string).collect();
                let tag = if *indecomposable { "partb_indec" } else { "partb" };
                write!(f, "{tag}({p},[{}],{c})", cs.join(","))
            }
            Self::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(" x "))
            }
            Self::CentralQuotient { group, word } => write!(f, "{group}/<{word}>"),
        }
    }
}

/// `word := term ("*" term)*`, `term := gen ("^" signed-integer)?`,
/// `gen := ("f" digits ".")* [a-z][a-zA-Z0-9_]*`. No whitespace.
fn parse_word(word: &str) -> Result<Vec<(&str, i64)>> {
    if word.is_empty() {
        return Err(parse_err("empty word"));
    }
    word.split('*')
        .map(|term| {
            let (name, exp) = match term.split_once('^') {
                Some((n, e)) => {
                    let ok = e.strip_prefix('-').unwrap_or(e);
                    if ok.is_empty() || !ok.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(parse_err(format!("bad exponent in \"{term}\"")));
                    }
                    (n, e.parse::<i64>().map_err(|_| parse_err(format!("exponent out of range in \"{term}\"")))?)
                }
                None => (term, 1),
            };
            let mut rest = name;
            while let Some(after) = rest.strip_prefix('f') {
                match after.split_once('.') {
                    Some((digits, tail)) if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
                        rest = tail
                    }
                    _ => break,
                }
            }
            let mut chars = rest.chars();
            let head_ok = chars.next().is_some_and(|c| c.is_ascii_lowercase());
            if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(parse_err(format!("bad generator name \"{name}\"")));
            }
            Ok((name, exp))
        })
        .collect()
}

/// Evaluates a generator word against the named elements of `g`.
pub fn evaluate_word(g: &Group, word: &str) -> Result<GroupElement> {
    let named = g.named_elements();
    parse_word(word)?.into_iter().try_fold(g.identity(), |acc, (name, exp)| {
        let x = named
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, x)| x)
            .ok_or_else(|| parse_err(format!("unknown generator \"{name}\" in {}", g.label())))?;
        Ok(g.mul(&acc, &g.pow(x, exp)))
    })
}
