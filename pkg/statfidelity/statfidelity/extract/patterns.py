"""Regular expressions recognising statistics and p-values in prose."""
import re


class ExtractionPatterns:
    # One-to-one character substitutions left behind by PDF extraction.
    # Every mapping keeps the string length so spans stay valid.
    CHAR_MAP = str.maketrans({
        "\u2212": "-",  # minus sign
        "\u2013": "-",  # en dash
        "\u2012": "-",  # figure dash
        "\u2010": "-",  # hyphen
        "\u00a0": " ",  # no-break space
        "\u2009": " ",  # thin space
        "\u202f": " ",  # narrow no-break space
        "\u2002": " ",
        "\u2003": " ",
    })

    # Relations; multi-character spellings first
    OPERATOR = r"(?:<=|>=|=<|=>|≤|≥|\\leq?\b|\\geq?\b|\\lt\b|\\gt\b|=|<|>|¼)"

    OPERATOR_NAMES = {
        "=": "Eq", "¼": "Eq",
        "<": "Lt", "\\lt": "Lt",
        ">": "Gt", "\\gt": "Gt",
        "<=": "Leq", "=<": "Leq", "≤": "Leq", "\\le": "Leq", "\\leq": "Leq",
        ">=": "Geq", "=>": "Geq", "≥": "Geq", "\\ge": "Geq", "\\geq": "Geq",
    }

    NUMBER = r"(?:\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?|\.\d+)"
    EXPONENT = r"(?:[eE]-?\d+)?"
    DF = r"(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?"
    SIGNED_NUMBER = rf"-?\s?{NUMBER}"

    # Not glued to a preceding word or number
    WORD_START = r"(?<![A-Za-z0-9_])"
    VALUE_END = r"(?![\d.]*\d)(?!\s?%)"

    _CHI_SYMBOL = (r"(?:χ\s*(?:²|\^?\s*\{?\s*2\s*\}?)"
                   r"|\\chi\s*(?:\^\s*\{?\s*2\s*\}?|²)"
                   r"|(?<![A-Za-z0-9_])X\s*(?:²|\^\s*\{?2\}?|2)"
                   r"|(?<![A-Za-z0-9_])(?i:chi[\s-]?squared?|chi[\s-]?sq\.?))")

    STATISTIC = re.compile(
        r"(?:"
        rf"{WORD_START}t\s*\(\s*(?P<t_df>{DF})\s*\)"
        rf"|{WORD_START}F\s*\(\s*(?P<f_df1>{DF})\s*,\s*(?P<f_df2>{DF})\s*\)"
        rf"|{WORD_START}r\s*\(\s*(?P<r_df>{DF})\s*\)"
        rf"|{WORD_START}(?P<z>[zZ])"
        rf"|(?P<chi>{_CHI_SYMBOL})\s*\(\s*(?P<chi_df>{DF})(?:\s*,\s*N\s*=\s*(?P<chi_n>{DF}))?\s*\)"
        r")"
        rf"\s*(?P<op>{OPERATOR})\s*(?P<value>{SIGNED_NUMBER}){VALUE_END}"
    )

    P_SYMBOL = (r"(?:\$?(?:\\textit\{|\\mathit\{)?(?:Pr|pr|ps|p|P)\}?\$?"
                r"(?:[\s-]?values?)?)")

    P_VALUE = re.compile(
        rf"{WORD_START}{P_SYMBOL}\s*(?P<op>{OPERATOR})\s*"
        rf"(?P<value>{NUMBER}{EXPONENT}){VALUE_END}"
    )

    DECLARED_NS = re.compile(
        rf"{WORD_START}(?:(?:p|P)\s*(?:=|is)\s*(?:n\.\s?s\.?|ns\b|non-?significant\b)"
        r"|\(\s*n\.?\s?s\.?\s*\)"
        r"|(?<![A-Za-z0-9.])n\.s\.)"
    )

    DECLARED_SIG = re.compile(
        rf"{WORD_START}(?:p|P)\s*(?:(?:=|is)\s*sig(?:\.|nificant\b)"
        r"|(?:<|≤|\\leq?)\s*(?:α|\\alpha\b|alpha\b))"
    )
