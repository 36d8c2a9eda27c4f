//! Random text: names, sentences, titles, and the labeled citation and
//! affiliation templates shared by the document generator and the parser
//! training sets.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::affiliation::ParsedAffiliation;
use crate::citation::{Author, ParsedReference, RefType};
use crate::tagger::LabeledText;

const WORDS: &[&str] = &[
    "analysis", "method", "model", "data", "results", "effect", "study", "system", "process", "approach",
    "structure", "function", "activity", "response", "level", "rate", "group", "sample", "patients", "cells",
    "protein", "expression", "treatment", "control", "performance", "quality", "design", "network", "signal",
    "measurement", "temperature", "concentration", "distribution", "evaluation", "development", "application",
    "comparison", "variation", "properties", "behaviour", "interaction", "mechanism", "extraction", "compound",
    "solution", "surface", "energy", "phase", "growth", "region", "population", "factor", "risk", "clinical",
    "chemical", "biological", "novel", "significant", "higher", "lower", "different", "several", "various",
    "important", "new", "specific", "general", "observed", "reported", "obtained", "measured", "estimated",
    "increased", "reduced", "compared", "associated", "related", "based", "using", "with", "from", "for", "the",
    "of", "in", "and", "on", "to", "a", "an", "by", "between", "under", "within", "during", "after", "among",
    "these", "this", "that", "our", "their", "its", "which", "were", "was", "are", "is", "has", "have", "been",
    "also", "both", "each", "all", "most", "more", "than", "may", "can", "not", "only", "two", "three", "first",
    "time", "range", "value", "values", "total", "mean", "standard", "test", "tests", "previous", "recent",
    "present", "current", "further", "large", "small", "strong", "weak", "high", "low", "direct", "indirect",
    "acid", "plant", "leaf", "extract", "species", "soil", "water", "blood", "tissue", "gene", "genes",
    "algorithm", "framework", "simulation", "parameters", "estimation", "inference", "learning", "image",
    "images", "features", "accuracy", "classification", "segmentation", "detection", "recognition",
];

const TITLE_WORDS: &[&str] = &[
    "analysis", "evaluation", "effects", "role", "characterization", "synthesis", "assessment", "study",
    "investigation", "properties", "activity", "screening", "modelling", "detection", "prediction",
    "optimization", "identification", "comparison", "estimation", "structure", "dynamics", "response",
    "antimicrobial", "cytotoxic", "antioxidant", "thermal", "genetic", "clinical", "molecular", "statistical",
    "cardiovascular", "medicine", "extracts", "compounds", "patients", "networks", "systems", "methods",
    "data", "models", "images", "documents", "proteins", "cells", "soils", "populations", "plants", "leaves",
];

const LINKERS: &[&str] = &["of", "in", "for", "on", "and", "with", "from", "at", "the", "by"];

const SYLLABLES: &[&str] = &[
    "ka", "ra", "mo", "li", "sa", "ve", "to", "ne", "du", "pa", "ri", "go", "ha", "bel", "mar", "ton", "ger",
    "son", "vik", "lan", "dor", "ste", "fen", "ber", "kov", "ski", "mi", "ora", "uel", "ric", "zan", "hol",
    "wen", "tis", "ula", "mer", "bra", "lo", "qui", "nas", "fal", "dri", "eng", "ost", "ham", "wald",
];

const GIVEN: &[&str] = &[
    "Mohammad", "Farzana", "Anna", "Peter", "Maria", "John", "Eugene", "Laura", "David", "Sarah", "Thomas",
    "Elena", "Michael", "Julia", "Robert", "Nadia", "Karim", "Lucas", "Sofia", "Daniel", "Emma", "Hiroshi",
    "Yuki", "Wei", "Li", "Ahmed", "Fatima", "Pierre", "Claire", "Marek", "Ewa", "Jan", "Olga", "Ivan", "Carlos",
    "Lucia", "Rahul", "Priya", "Samuel", "Hannah",
];

const SURNAMES: &[&str] = &[
    "Rashid", "Alam", "Rahman", "Braunwald", "Smith", "Johnson", "Kowalski", "Nowak", "Schmidt", "Muller",
    "Rossi", "Garcia", "Martin", "Tanaka", "Chen", "Wang", "Kim", "Ivanov", "Novak", "Dubois", "Silva",
    "Hassan", "Khan", "Ahmed", "Brown", "Taylor", "Wilson", "Anderson", "Lopez", "Fischer",
];

pub(crate) const FIELDS: &[&str] = &[
    "Biomedical", "Pharmaceutical Chemistry", "Pharmacy", "Physics", "Chemistry", "Computer Science",
    "Mathematics", "Biology", "Microbiology", "Biochemistry", "Medicine", "Engineering", "Genetics",
    "Ecology", "Statistics", "Informatics", "Materials Science", "Geology", "Neuroscience", "Botany",
    "Public Health", "Physiology", "Pharmacology", "Economics",
];

/// (city, country) pairs; the city is in the shipped city list.
const PLACES: &[(&str, &str)] = &[
    ("Dhaka", "Bangladesh"), ("Warsaw", "Poland"), ("Berlin", "Germany"), ("Paris", "France"),
    ("London", "United Kingdom"), ("Boston", "USA"), ("Chicago", "United States"), ("Madrid", "Spain"),
    ("Rome", "Italy"), ("Kyoto", "Japan"), ("Seoul", "South Korea"), ("Beijing", "China"),
    ("Delhi", "India"), ("Mumbai", "India"), ("Cairo", "Egypt"), ("Nairobi", "Kenya"), ("Oslo", "Norway"),
    ("Helsinki", "Finland"), ("Prague", "Czech Republic"), ("Budapest", "Hungary"), ("Lisbon", "Portugal"),
    ("Dublin", "Ireland"), ("Melbourne", "Australia"), ("Montreal", "Canada"), ("Istanbul", "Turkey"),
    ("Bangkok", "Thailand"), ("Athens", "Greece"), ("Geneva", "Switzerland"), ("Amsterdam", "Netherlands"),
    ("Krakow", "Poland"),
];

const JOURNALS: &[(&str, &str)] = &[
    ("New England Journal of Medicine", "N. Engl. J. Med."),
    ("Dhaka University Journal of Pharmaceutical Sciences", "Dhaka Univ. J. Pharm. Sci."),
    ("Journal of Biological Chemistry", "J. Biol. Chem."),
    ("Physical Review Letters", "Phys. Rev. Lett."),
    ("Nucleic Acids Research", "Nucleic Acids Res."),
    ("Journal of Applied Physics", "J. Appl. Phys."),
    ("Pattern Recognition", "Pattern Recognit."),
    ("Annals of Botany", "Ann. Bot."),
    ("International Journal of Document Analysis and Recognition", "Int. J. Doc. Anal. Recognit."),
    ("Journal of Ethnopharmacology", "J. Ethnopharmacol."),
    ("Bioinformatics", "Bioinformatics"),
    ("Computer Vision and Image Understanding", "Comput. Vis. Image Underst."),
    ("European Journal of Pharmacology", "Eur. J. Pharmacol."),
    ("Archives of Microbiology", "Arch. Microbiol."),
    ("Acta Crystallographica", "Acta Crystallogr."),
];

const CONFERENCES: &[&str] = &[
    "International Conference on Document Analysis and Recognition",
    "Annual Meeting of the Association for Computational Linguistics",
    "International Symposium on Biomedical Imaging",
    "European Conference on Machine Learning",
    "Workshop on Document Image Analysis",
    "IEEE Conference on Computer Vision and Pattern Recognition",
];

const MONTHS: &[&str] = &[
    "January", "February", "March", "April", "May", "June", "July", "August", "September", "October",
    "November", "December",
];

pub(crate) const L1_TITLES: &[&str] = &[
    "Introduction", "Materials and Methods", "Results", "Discussion", "Conclusions", "Background",
    "Related Work", "Experimental", "Methodology", "Evaluation",
];

pub(crate) const ARTICLE_TYPES: &[&str] = &["Research Article", "Original Article", "Short Communication", "Review Article"];

pub(crate) fn pick<'a, R: Rng>(rng: &mut R, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).copied().expect("non-empty list")
}

pub(crate) fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// A pronounceable made-up word, mostly unseen in any vocabulary.
pub(crate) fn rare_word<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(2..=3);
    (0..n).map(|_| pick(rng, SYLLABLES)).collect()
}

pub(crate) fn surname<R: Rng>(rng: &mut R) -> String {
    if rng.gen_bool(0.3) {
        pick(rng, SURNAMES).to_string()
    } else {
        capitalize(&rare_word(rng))
    }
}

pub(crate) fn given<R: Rng>(rng: &mut R) -> String {
    pick(rng, GIVEN).to_string()
}

pub(crate) fn place<R: Rng>(rng: &mut R) -> (&'static str, &'static str) {
    *PLACES.choose(rng).expect("places")
}

pub(crate) fn journal<R: Rng>(rng: &mut R) -> (&'static str, &'static str) {
    *JOURNALS.choose(rng).expect("journals")
}

pub(crate) fn month<R: Rng>(rng: &mut R) -> &'static str {
    pick(rng, MONTHS)
}

pub(crate) fn sentence<R: Rng>(rng: &mut R, refs: usize) -> String {
    let n = rng.gen_range(8..=18);
    let mut words: Vec<String> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.08) {
                rare_word(rng)
            } else {
                pick(rng, WORDS).to_string()
            }
        })
        .collect();
    words[0] = capitalize(&words[0]);
    if rng.gen_bool(0.15) {
        let i = rng.gen_range(1..n);
        words[i].push(',');
    }
    let mut s = words.join(" ");
    if refs > 0 && rng.gen_bool(0.2) {
        s.push_str(&format!(" [{}]", rng.gen_range(1..=refs)));
    }
    s.push('.');
    s
}

pub(crate) fn paragraph<R: Rng>(rng: &mut R, min_chars: usize, refs: usize) -> String {
    let mut s = sentence(rng, refs);
    while s.len() < min_chars {
        s.push(' ');
        s.push_str(&sentence(rng, refs));
    }
    s
}

fn title_phrase<R: Rng>(rng: &mut R, words: usize) -> Vec<String> {
    (0..words)
        .map(|i| {
            if i > 0 && i + 1 < words && rng.gen_bool(0.3) {
                pick(rng, LINKERS).to_string()
            } else if rng.gen_bool(0.15) {
                rare_word(rng)
            } else {
                pick(rng, TITLE_WORDS).to_string()
            }
        })
        .collect()
}

/// A paper title, optionally with subtitles and an enumeration.
pub(crate) fn title<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(3..=8);
    let mut s = capitalize(&title_phrase(rng, n).join(" "));
    for _ in 0..rng.gen_range(0..=2) {
        s.push_str(": ");
        let n = rng.gen_range(2..=6);
        s.push_str(&title_phrase(rng, n).join(" "));
    }
    if rng.gen_bool(0.2) {
        let a = pick(rng, TITLE_WORDS);
        let b = pick(rng, TITLE_WORDS);
        let c = pick(rng, TITLE_WORDS);
        s.push_str(&format!(": {a}, {b}, and {c}"));
    }
    s
}

pub(crate) fn header_title<R: Rng>(rng: &mut R, level: u8) -> String {
    if level == 1 && rng.gen_bool(0.5) {
        return pick(rng, L1_TITLES).to_string();
    }
    let n = rng.gen_range(1..=4);
    capitalize(&title_phrase(rng, n).join(" "))
}

pub(crate) fn keyword_list<R: Rng>(rng: &mut R) -> Vec<String> {
    (0..rng.gen_range(3..=5))
        .map(|_| {
            let n = rng.gen_range(1..=2);
            (0..n).map(|_| pick(rng, TITLE_WORDS)).collect::<Vec<_>>().join(" ")
        })
        .collect()
}

/// Segment list builder for labeled strings.
#[derive(Default)]
struct Segs(Vec<(String, Option<&'static str>)>);

impl Segs {
    fn text(&mut self, s: impl Into<String>) {
        self.0.push((s.into(), None));
    }
    fn label(&mut self, s: impl Into<String>, l: &'static str) {
        self.0.push((s.into(), Some(l)));
    }
    fn finish(self) -> LabeledText {
        LabeledText::from_segments(&self.0)
    }
}

/// A generated affiliation: the raw string with labeled spans and its parse.
pub(crate) fn affiliation<R: Rng>(rng: &mut R) -> (LabeledText, ParsedAffiliation) {
    let (city, country) = place(rng);
    let field = pick(rng, FIELDS);
    let zip = rng.gen_range(10..=99) * 100;
    let institution = match rng.gen_range(0..6) {
        0 => format!("Department of {field}, University of {city}"),
        1 => format!("Department of {field}, Faculty of {}, University of {city}", pick(rng, FIELDS)),
        2 => format!("Centre for {field} Research, University of {city}"),
        3 => format!("{} Institute of {field}", capitalize(&rare_word(rng))),
        4 => format!("{city} {}", pick(rng, &["General Hospital", "Medical Center", "Research Institute"])),
        _ => format!("Laboratory of {field}, {} University", capitalize(&rare_word(rng))),
    };
    let address = match rng.gen_range(0..5) {
        0 => Some(format!("{city}-{zip}")),
        1 => Some(format!("{zip} {city}")),
        2 => Some(format!("{} Street {}, {city}", capitalize(&rare_word(rng)), rng.gen_range(1..200))),
        3 => Some(city.to_string()),
        _ => None,
    };
    let mut s = Segs::default();
    s.label(institution.clone(), "institution");
    if let Some(a) = &address {
        s.text(", ");
        s.label(a.clone(), "address");
    }
    s.text(", ");
    s.label(country, "country");
    let lt = s.finish();
    let parsed = ParsedAffiliation {
        raw: lt.text.clone(),
        institution: Some(institution),
        address,
        country: Some(country.to_string()),
        country_iso: crate::dict::Dictionaries::builtin().country_iso(country).map(str::to_string),
    };
    (lt, parsed)
}

#[derive(Clone, Copy)]
enum NameStyle {
    Initials,
    Initials2,
    Vancouver,
    Full,
}

fn initials_dotted(given: &str, second: Option<char>, spaced: bool) -> String {
    let first = given.chars().next().unwrap_or('X');
    match second {
        Some(c) if spaced => format!("{first}. {c}."),
        Some(c) => format!("{first}.{c}."),
        None => format!("{first}."),
    }
}

/// A generated citation with labeled spans and its expected parse. `marker`
/// is prepended verbatim (e.g. "[3] ").
pub(crate) fn citation<R: Rng>(rng: &mut R, marker: &str) -> (LabeledText, ParsedReference) {
    let style = match rng.gen_range(0..4) {
        0 => NameStyle::Initials,
        1 => NameStyle::Initials2,
        2 => NameStyle::Vancouver,
        _ => NameStyle::Full,
    };
    let template = rng.gen_range(0..5);
    let n_authors = rng.gen_range(1..=4);
    let authors: Vec<Author> = (0..n_authors)
        .map(|_| {
            let g = given(rng);
            let second = rng.gen_bool(0.4).then(|| (b'A' + rng.gen_range(0..26u8)) as char);
            let mut sn = surname(rng);
            if rng.gen_bool(0.05) {
                sn = format!("{sn}-{}", surname(rng));
            }
            let given = match style {
                NameStyle::Initials => initials_dotted(&g, second, true),
                NameStyle::Initials2 => initials_dotted(&g, second, false),
                NameStyle::Vancouver => {
                    let mut s: String = g.chars().take(1).collect();
                    s.extend(second);
                    s
                }
                NameStyle::Full => g,
            };
            Author { given, surname: sn }
        })
        .collect();
    let title = title(rng);
    let (jfull, jabbr) = journal(rng);
    let source = if rng.gen_bool(0.5) { jfull } else { jabbr }.to_string();
    let volume = rng.gen_range(1..=400).to_string();
    let issue = rng.gen_range(1..=24).to_string();
    let p1 = rng.gen_range(1..=2000);
    let p2 = p1 + rng.gen_range(1..=30);
    let (p1, p2) = (p1.to_string(), p2.to_string());
    let year = rng.gen_range(1960..=2014).to_string();

    let mut s = Segs::default();
    s.text(marker);
    let sep_last = pick(rng, &[", and ", " and ", ", ", " & "]);
    for (i, a) in authors.iter().enumerate() {
        if i > 0 {
            s.text(if i + 1 == authors.len() { sep_last } else { ", " });
        }
        match style {
            NameStyle::Vancouver => {
                s.label(a.surname.clone(), "surname");
                s.text(" ");
                s.label(a.given.clone(), "first_name");
            }
            _ => {
                s.label(a.given.clone(), "first_name");
                s.text(" ");
                s.label(a.surname.clone(), "surname");
            }
        }
    }
    let mut r = ParsedReference {
        authors: authors.clone(),
        title: Some(title.clone()),
        ..Default::default()
    };
    match template {
        // IEEE-like
        0 => {
            s.text(", ");
            s.label(title.clone(), "title");
            s.text(", ");
            s.label(source.clone(), "source");
            s.text(", vol. ");
            s.label(volume.clone(), "volume");
            s.text(", no. ");
            s.label(issue.clone(), "issue");
            s.text(", pp. ");
            s.label(p1.clone(), "page_first");
            s.text("-");
            s.label(p2.clone(), "page_last");
            s.text(", ");
            s.label(year.clone(), "year");
            s.text(".");
            r.ref_type = Some(RefType::JournalPaper);
            r.source = Some(source);
            r.volume = Some(volume);
            r.issue = Some(issue);
            r.pages = Some((p1, p2));
        }
        // author-year
        1 => {
            s.text(" (");
            s.label(year.clone(), "year");
            s.text("). ");
            s.label(title.clone(), "title");
            s.text(". ");
            s.label(source.clone(), "source");
            s.text(", ");
            s.label(volume.clone(), "volume");
            let with_issue = rng.gen_bool(0.6);
            if with_issue {
                s.text("(");
                s.label(issue.clone(), "issue");
                s.text(")");
                r.issue = Some(issue);
            }
            s.text(", ");
            s.label(p1.clone(), "page_first");
            s.text("-");
            s.label(p2.clone(), "page_last");
            s.text(".");
            r.ref_type = Some(RefType::JournalPaper);
            r.source = Some(source);
            r.volume = Some(volume);
            r.pages = Some((p1, p2));
        }
        // Vancouver-like
        2 => {
            s.text(". ");
            s.label(title.clone(), "title");
            s.text(". ");
            s.label(source.clone(), "source");
            s.text(if source.ends_with('.') { " " } else { ". " });
            s.label(year.clone(), "year");
            s.text(";");
            s.label(volume.clone(), "volume");
            s.text("(");
            s.label(issue.clone(), "issue");
            s.text("):");
            s.label(p1.clone(), "page_first");
            s.text("-");
            s.label(p2.clone(), "page_last");
            s.text(".");
            r.ref_type = Some(RefType::JournalPaper);
            r.source = Some(source);
            r.volume = Some(volume);
            r.issue = Some(issue);
            r.pages = Some((p1, p2));
        }
        // conference
        3 => {
            let (city, _) = place(rng);
            let conf = format!("Proceedings of the {}", pick(rng, CONFERENCES));
            s.text(", ");
            s.label(title.clone(), "title");
            s.text(", in: ");
            s.label(conf.clone(), "source");
            s.text(format!(", {city}, "));
            s.label(year.clone(), "year");
            s.text(", pp. ");
            s.label(p1.clone(), "page_first");
            s.text("-");
            s.label(p2.clone(), "page_last");
            s.text(".");
            r.ref_type = Some(RefType::ConferenceProceedings);
            r.source = Some(conf);
            r.pages = Some((p1, p2));
        }
        // technical report
        _ => {
            let (city, _) = place(rng);
            let inst = format!("University of {city}");
            s.text(". ");
            s.label(title.clone(), "title");
            s.text(format!(". Technical Report TR-{}-{}, ", year, rng.gen_range(1..=99)));
            s.label(inst.clone(), "source");
            s.text(", ");
            s.label(year.clone(), "year");
            s.text(".");
            r.ref_type = Some(RefType::TechnicalReport);
            r.source = Some(inst);
        }
    }
    r.year = Some(year);
    if rng.gen_bool(0.15) {
        let doi = format!("10.{}/{}.{}", rng.gen_range(1000..=9999), rare_word(rng), rng.gen_range(100..=999));
        s.text(format!(" doi:{doi}"));
        r.doi = Some(doi);
    }
    let lt = s.finish();
    r.raw = lt.text.clone();
    (lt, r)
}

/// Training sets for the parsers.
pub fn citation_training_set(seed: u64, n: usize) -> Vec<(LabeledText, ParsedReference)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let marker = match rng.gen_range(0..6) {
                0 | 1 => format!("[{}] ", i % 60 + 1),
                2 => format!("{}. ", i % 60 + 1),
                _ => String::new(),
            };
            citation(&mut rng, &marker)
        })
        .collect()
}

pub fn affiliation_training_set(seed: u64, n: usize) -> Vec<(LabeledText, ParsedAffiliation)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| affiliation(&mut rng)).collect()
}
