#ifndef ORDFORGE_DSL_HPP
#define ORDFORGE_DSL_HPP

// The script language: lexer, LL(1) parser with binding checks, and the
// canonical printer.
//
//   script   := { stmt }
//   stmt     := decl | command
//   decl     := ('let'|'model'|'name'|'nep'|'profile'|'product') ID '=' expr ['over' ID] ';'
//             | 'prefix' ID '=' ID '(' ID {',' ID} ')' ';'
//             | ('creature'|'tree') ID { option } ';'
//             | 'poset' ID '{' 'elems' elem {',' elem} ';' ['le' ID '<=' ID {',' ID '<=' ID} ';'] '}'
//             | 'formula' ID '=' formula ';'
//   command  := WORD { expr } ';'              (also 'creature' 'validate' expr)
//   expr     := ('ord'|'forcing') '(' args ')' | ID ['=' expr] | NUM | STRING | '--' ID expr
//             | '{' items '}' | '(' args ')' | '[' items ']'
//   items    := [ expr [':' expr] { ',' expr [':' expr] } ]
//   formula  := disj ['->' formula]
//   disj     := conj { 'or' conj }      conj := unary { 'and' unary }
//   unary    := 'not' unary | ('exists'|'forall') ID ['in' ID] '.' formula
//             | 'true' | 'false' | ID ('in'|'=') ID | '(' formula ')'

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ordforge/formula.hpp"

namespace ordforge::dsl {

struct Loc {
    int line = 1;
    int column = 1;
    friend bool operator==(const Loc&, const Loc&) = default;
};

struct Diagnostic {
    std::string code;
    Loc loc;
    std::string message;

    std::string str() const {
        return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": error " + code + ": " + message;
    }
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(Diagnostic d) : std::runtime_error(d.str()), diag_(std::move(d)) {}
    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

// ---------------------------------------------------------------- tokens

enum class Tok { Ident, Number, String, Flag, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier, string contents, flag name or punctuation
    std::uint64_t number = 0;
    Loc loc;
};

inline bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
inline bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; }

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    Loc loc;
    auto fail = [&](const char* code, const std::string& msg, Loc at) { throw ParseError({code, at, msg}); };
    auto advance = [&](std::size_t n) {
        for (; n > 0; --n, ++i) {
            if (src[i] == '\n') {
                ++loc.line;
                loc.column = 1;
            } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
                ++loc.column;
            }
        }
    };
    auto letter_at = [&](std::size_t k) { return k < src.size() && ident_start(static_cast<unsigned char>(src[k])); };
    while (i < src.size()) {
        const unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.loc = loc;
        if (ident_start(c)) {
            std::size_t j = i;
            // '-' joins words such as ord-transitive; "->" never does.
            while (j < src.size() && (ident_char(static_cast<unsigned char>(src[j])) || (src[j] == '-' && letter_at(j + 1)))) ++j;
            t.kind = Tok::Ident;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(c)) {
            std::size_t j = i;
            std::uint64_t v = 0;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                const std::uint64_t d = static_cast<std::uint64_t>(src[j] - '0');
                if (v > (UINT64_MAX - d) / 10) fail("E003", "number literal too large", loc);
                v = v * 10 + d;
                ++j;
            }
            if (letter_at(j)) fail("E001", "identifier cannot start with a digit", loc);
            t.kind = Tok::Number;
            t.number = v;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (c == '"') {
            std::string s;
            std::size_t j = i + 1;
            for (;; ++j) {
                if (j >= src.size() || src[j] == '\n') fail("E002", "unterminated string literal", loc);
                if (src[j] == '"') break;
                if (src[j] == '\\') {
                    ++j;
                    if (j >= src.size() || (src[j] != '"' && src[j] != '\\')) fail("E001", "unknown escape in string literal", loc);
                }
                s.push_back(src[j]);
            }
            t.kind = Tok::String;
            t.text = std::move(s);
            advance(j + 1 - i);
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            std::size_t j = i + 2;
            if (!letter_at(j)) fail("E001", "expected a flag name after '--'", loc);
            while (j < src.size() && (ident_char(static_cast<unsigned char>(src[j])) || (src[j] == '-' && letter_at(j + 1)))) ++j;
            t.kind = Tok::Flag;
            t.text = src.substr(i + 2, j - i - 2);
            advance(j - i);
        } else {
            static const char* two[] = {"<=", "->"};
            t.kind = Tok::Punct;
            for (const char* p : two)
                if (src.compare(i, 2, p) == 0) t.text = p;
            if (t.text.empty()) {
                if (std::string("{}()[],;=:.").find(static_cast<char>(c)) == std::string::npos)
                    fail("E001", std::string("unexpected character '") + static_cast<char>(c) + "'", loc);
                t.text = std::string(1, static_cast<char>(c));
            }
            advance(t.text.size());
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.loc = loc;
    out.push_back(end);
    return out;
}

// ------------------------------------------------------------------- AST

struct Expr {
    enum class Kind { Ident, Number, String, Call, Set, Tuple, List, Entry, Option, Flag };
    Kind kind = Kind::Ident;
    std::string text;  // identifier, string, callee, option or flag name
    std::uint64_t number = 0;
    std::vector<Expr> items;
    Loc loc;

    bool is_ident() const { return kind == Kind::Ident; }
    bool is_number() const { return kind == Kind::Number; }
};

/// Value kinds a name can be bound to.
enum class Kind { Term, Model, Poset, Formula, Nep, Creature, Profile, Prefix, Tree, Product };

inline const char* to_string(Kind k) {
    switch (k) {
        case Kind::Term: return "term";
        case Kind::Model: return "model";
        case Kind::Poset: return "poset";
        case Kind::Formula: return "formula";
        case Kind::Nep: return "nep";
        case Kind::Creature: return "creature";
        case Kind::Profile: return "profile";
        case Kind::Prefix: return "prefix";
        case Kind::Tree: return "tree";
        case Kind::Product: return "product";
    }
    return "?";
}

struct Stmt {
    std::string keyword;  // declaration keyword or command name
    bool decl = false;
    std::string name;     // the declared name
    std::vector<Expr> args;
    std::optional<Formula> formula;
    Loc loc;
};

struct Script {
    std::vector<Stmt> statements;
    std::map<std::string, Kind> bindings;
};

// --------------------------------------------------------- command table

/// Positional slot kinds: a bound kind name ("model", "creature", ...),
/// "term", "num", "subset" ({1,2}), "seq" ((0,1)), "seqset" ({(0,1)}),
/// "eta" ({0: "01"}) or "word:a|b|c".
struct CommandSpec {
    std::string name;
    std::string module;
    std::vector<std::vector<std::string>> forms;
    std::map<std::string, std::string> options;  // key → slot kind; "*" admits any key
    std::vector<std::string> flags;
    std::vector<std::string> operations;
    std::string summary;
};

inline const std::vector<CommandSpec>& command_table() {
    static const std::vector<CommandSpec> table = {
        {"check", "set_kernel",
         {{"word:ord-absolute|ord-transitive|ord-closed|transitive|extensional|successor-absolute", "model"},
          {"word:forcing-ready", "model", "poset"}},
         {}, {},
         {"is_ord_absolute", "is_ord_transitive", "is_successor_absolute", "is_forcing_ready"},
         "structural properties of a model"},
        {"collapse", "set_kernel", {{"model"}, {"word:ord|transitive|labeled", "model"}}, {}, {},
         {"ord_collapse", "transitive_collapse", "labeled_collapse"}, "collapse a model"},
        {"uncollapse", "set_kernel", {{"model"}}, {}, {}, {"uncollapse"}, "undo the labeled collapse"},
        {"ordclos", "set_kernel", {{"term"}}, {}, {}, {"ordclos"}, "hereditary closure down to ordinals"},
        {"hco", "set_kernel", {{"term"}}, {{"alpha", "num"}, {"bound", "num"}}, {}, {"hco_check"},
         "hereditary countability below alpha"},
        {"holds", "set_kernel", {{"formula", "model"}}, {{"*", "term"}}, {}, {"eval_formula"},
         "truth of a formula in a model"},
        {"mversion", "set_kernel", {{"nep", "model"}}, {}, {}, {"m_version", "is_nep_parameter"},
         "the M-version of a parameter"},
        {"generic", "forcing_engine", {{"term", "model", "poset"}}, {}, {}, {"is_generic"},
         "genericity of a filter"},
        {"generics", "forcing_engine", {{"model", "poset"}}, {}, {}, {"enumerate_generics"},
         "the maximal generic filters"},
        {"eval", "forcing_engine", {{"term", "term", "model"}}, {}, {},
         {"eval_name_M", "eval_name_V", "eval_name_via_collapse"}, "value of a name under a generic"},
        {"forces", "forcing_engine", {{"model", "poset", "term", "formula"}}, {{"*", "term"}}, {},
         {"forces_semantic"}, "the forcing relation"},
        {"extend", "forcing_engine", {{"model", "poset", "term"}}, {}, {}, {"extend_model"},
         "the generic extension"},
        {"transfer", "forcing_engine", {{"model", "poset", "term"}}, {}, {}, {"genericity_transfer"},
         "genericity across the ord-collapse"},
        {"absolute", "forcing_engine", {{"model", "model", "poset", "term", "term"}}, {}, {},
         {"eval_absoluteness_check"}, "evaluation computed inside a larger model"},
        {"creature validate", "creature_calc", {{"creature"}}, {}, {}, {"validate"}, "the creature clauses"},
        {"stronger", "creature_calc", {{"creature", "creature"}}, {}, {}, {"stronger"}, "creature order"},
        {"half", "creature_calc", {{"creature"}}, {}, {}, {"half"}, "halving a creature"},
        {"unhalve", "creature_calc", {{"creature", "creature"}}, {}, {}, {"unhalve"}, "undoing a halving"},
        {"join", "creature_calc", {{"creature", "creature"}}, {}, {}, {"join"}, "weakest common strengthening"},
        {"split", "creature_calc", {{"creature", "creature", "subset"}}, {}, {}, {"split_decomposition"},
         "decomposing a subset along a join"},
        {"bigness", "creature_calc", {{"creature", "subset"}}, {}, {}, {"bigness_refine"},
         "homogeneous refinement for a two-colouring"},
        {"pos", "creature_calc", {{"prefix", "num"}}, {}, {}, {"pos"}, "possibilities of a prefix"},
        {"wedge", "creature_calc", {{"prefix", "seq"}}, {}, {}, {"wedge"}, "prefix above a possibility"},
        {"horizon", "creature_calc", {{"prefix", "prefix", "num"}}, {}, {}, {"incompat_horizon"},
         "finite-horizon incompatibility verdict"},
        {"incomp", "creature_calc", {{"prefix"}, {"prefix", "num"}}, {}, {}, {"halving_incompatible"},
         "incompatible strengthening of a halved prefix"},
        {"decide", "creature_calc", {{"prefix", "num", "num", "seqset"}}, {}, {}, {"pure_decision_core"},
         "downward induction of pure decision"},
        {"front", "tree_lab", {{"tree", "num"}}, {}, {}, {"splitting_front"}, "a splitting front"},
        {"le-nu", "tree_lab", {{"product", "product", "num", "subset"}}, {}, {}, {"le_nu"},
         "the fusion order"},
        {"pos-u", "tree_lab", {{"product", "num", "subset"}}, {}, {}, {"pos_u"}, "front tuples on u"},
        {"wedge-u", "tree_lab", {{"product", "eta"}}, {}, {}, {"wedge_u"}, "product above a front tuple"},
        {"enumerate", "cli", {{"word:creatures"}, {"word:trees"}},
         {{"width", "num"}, {"index", "num"}, {"depth", "num"}}, {},
         {"enumerate_creatures", "enumerate_trees"}, "enumeration statistics as CSV"},
        {"suite", "cli", {{"word:all|kernel|forcing|creature|tree"}}, {}, {"size", "seed"},
         {"run"}, "randomized and exhaustive invariant suites"},
    };
    return table;
}

inline const CommandSpec* find_command(const std::string& name) {
    for (const CommandSpec& c : command_table())
        if (c.name == name) return &c;
    return nullptr;
}

inline const std::set<std::string>& decl_keywords() {
    static const std::set<std::string> kw = {"let", "model", "poset", "name", "formula", "nep",
                                              "creature", "profile", "prefix", "tree", "product"};
    return kw;
}

// ----------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(lex(src)) {}

    Script parse() {
        while (peek().kind != Tok::End) script_.statements.push_back(statement());
        return std::move(script_);
    }

private:
    std::vector<Token> toks_;
    std::size_t at_ = 0;
    Script script_;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(at_ + k, toks_.size() - 1)]; }
    Token take() { return toks_[std::min(at_++, toks_.size() - 1)]; }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Tok::Ident: return "'" + t.text + "'";
            case Tok::Number: return "number " + t.text;
            case Tok::String: return "string \"" + t.text + "\"";
            case Tok::Flag: return "flag --" + t.text;
            case Tok::Punct: return "'" + t.text + "'";
            case Tok::End: return "end of input";
        }
        return "?";
    }

    [[noreturn]] static void fail(const char* code, Loc loc, const std::string& msg) { throw ParseError({code, loc, msg}); }
    [[noreturn]] void expected(const std::string& what) const {
        fail("E101", peek().loc, "expected " + what + ", found " + describe(peek()));
    }

    bool at_punct(const char* p, std::size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).text == p; }
    bool at_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }
    void punct(const char* p) {
        if (!at_punct(p)) expected(std::string("'") + p + "'");
        take();
    }
    Token ident(const char* what = "an identifier") {
        if (peek().kind != Tok::Ident) expected(what);
        return take();
    }
    void word(const char* w) {
        if (!at_word(w)) expected(std::string("'") + w + "'");
        take();
    }

    // ---- binding

    void bind(const Token& name, Kind k) {
        if (script_.bindings.count(name.text)) fail("E103", name.loc, "'" + name.text + "' is already bound");
        script_.bindings.emplace(name.text, k);
    }

    Kind lookup(const Expr& e) const {
        auto it = script_.bindings.find(e.text);
        if (it == script_.bindings.end()) fail("E102", e.loc, "unbound name '" + e.text + "'");
        return it->second;
    }

    void require(const Expr& e, Kind k) const {
        if (!e.is_ident()) fail("E104", e.loc, std::string("expected the name of a ") + to_string(k));
        Kind got = lookup(e);
        if (got != k)
            fail("E104", e.loc, "'" + e.text + "' is a " + to_string(got) + ", expected a " + to_string(k));
    }

    /// Terms: ord(n), {…}, Kuratowski pairs (a, b), and names of terms or models.
    void check_term(const Expr& e) const {
        using EK = Expr::Kind;
        switch (e.kind) {
            case EK::Ident: {
                Kind k = lookup(e);
                if (k != Kind::Term && k != Kind::Model)
                    fail("E104", e.loc, "'" + e.text + "' is a " + to_string(k) + ", expected a term");
                return;
            }
            case EK::Call:
                if (e.text == "ord" && e.items.size() == 1 && e.items[0].is_number() && e.items[0].number <= UINT32_MAX)
                    return;
                fail("E104", e.loc, "expected a term; ord takes one number");
            case EK::Set:
                for (const Expr& x : e.items) check_term(x);
                return;
            case EK::Tuple:
                if (e.items.size() != 2) fail("E104", e.loc, "a pair term has exactly two components");
                for (const Expr& x : e.items) check_term(x);
                return;
            default: fail("E104", e.loc, "expected a term");
        }
    }

    static void check_number(const Expr& e, const char* what = "a number") {
        if (!e.is_number() || e.number > UINT32_MAX) fail("E104", e.loc, std::string("expected ") + what);
    }

    void check_slot(const Expr& e, const std::string& slot) const {
        using EK = Expr::Kind;
        if (slot == "term") return check_term(e);
        if (slot == "num") return check_number(e);
        if (slot == "subset" || slot == "seqset") {
            if (e.kind != EK::Set) fail("E104", e.loc, "expected a set literal");
            for (const Expr& x : e.items) check_slot(x, slot == "subset" ? "num" : "seq");
            return;
        }
        if (slot == "seq") {
            if (e.kind != EK::Tuple) fail("E104", e.loc, "expected a sequence (n, ...)");
            for (const Expr& x : e.items) check_number(x);
            return;
        }
        if (slot == "eta") {
            if (e.kind != EK::Set) fail("E104", e.loc, "expected {index: \"node\", ...}");
            for (const Expr& x : e.items) {
                if (x.kind != EK::Entry || x.items[1].kind != EK::String) fail("E104", x.loc, "expected index: \"node\"");
                check_number(x.items[0]);
            }
            return;
        }
        if (slot.rfind("word:", 0) == 0) {
            std::set<std::string> alts;
            std::stringstream ss(slot.substr(5));
            for (std::string w; std::getline(ss, w, '|');) alts.insert(w);
            if (!e.is_ident() || !alts.count(e.text)) fail("E104", e.loc, "expected one of " + slot.substr(5));
            return;
        }
        static const std::map<std::string, Kind> kinds = {
            {"model", Kind::Model},       {"poset", Kind::Poset},   {"formula", Kind::Formula},
            {"nep", Kind::Nep},           {"creature", Kind::Creature}, {"profile", Kind::Profile},
            {"prefix", Kind::Prefix},     {"tree", Kind::Tree},     {"product", Kind::Product}};
        require(e, kinds.at(slot));
    }

    // ---- expressions

    std::vector<Expr> items(const char* close, bool entries) {
        std::vector<Expr> out;
        if (at_punct(close)) return out;
        for (;;) {
            Expr e = expr();
            if (entries && at_punct(":")) {
                take();
                Expr entry;
                entry.kind = Expr::Kind::Entry;
                entry.loc = e.loc;
                entry.items = {std::move(e), expr()};
                e = std::move(entry);
            }
            out.push_back(std::move(e));
            if (!at_punct(",")) break;
            take();
        }
        return out;
    }

    Expr expr() {
        Expr e;
        e.loc = peek().loc;
        const Token& t = peek();
        using EK = Expr::Kind;
        if (t.kind == Tok::Ident) {
            e.text = take().text;
            if ((e.text == "ord" || e.text == "forcing") && at_punct("(")) {
                take();
                e.kind = EK::Call;
                e.items = items(")", false);
                punct(")");
            } else if (at_punct("=")) {
                take();
                e.kind = EK::Option;
                e.items.push_back(expr());
            }
            return e;
        }
        if (t.kind == Tok::Number) {
            e.kind = EK::Number;
            e.number = take().number;
            return e;
        }
        if (t.kind == Tok::String) {
            e.kind = EK::String;
            e.text = take().text;
            return e;
        }
        if (t.kind == Tok::Flag) {
            e.kind = EK::Flag;
            e.text = take().text;
            e.items.push_back(expr());
            return e;
        }
        if (at_punct("{") || at_punct("[")) {
            const bool brace = at_punct("{");
            take();
            e.kind = brace ? EK::Set : EK::List;
            e.items = items(brace ? "}" : "]", true);
            punct(brace ? "}" : "]");
            return e;
        }
        if (at_punct("(")) {
            take();
            e.kind = EK::Tuple;
            e.items = items(")", false);
            punct(")");
            return e;
        }
        expected("an expression");
    }

    // ---- formulas

    Token var() { return ident("a variable"); }

    Formula formula() {
        Formula a = disjunction();
        if (at_punct("->")) {
            take();
            return Formula::implies(std::move(a), formula());
        }
        return a;
    }

    Formula disjunction() {
        Formula a = conjunction();
        while (at_word("or")) {
            take();
            a = Formula::disj(std::move(a), conjunction());
        }
        return a;
    }

    Formula conjunction() {
        Formula a = unary();
        while (at_word("and")) {
            take();
            a = Formula::conj(std::move(a), unary());
        }
        return a;
    }

    Formula unary() {
        if (at_word("not")) {
            take();
            return Formula::negate(unary());
        }
        if (at_word("exists") || at_word("forall")) {
            const bool ex = take().text == "exists";
            std::string x = var().text;
            std::optional<std::string> bound;
            if (at_word("in")) {
                take();
                bound = var().text;
            }
            punct(".");
            Formula body = formula();
            if (bound) return ex ? Formula::exists_in(x, *bound, std::move(body)) : Formula::forall_in(x, *bound, std::move(body));
            return ex ? Formula::exists(x, std::move(body)) : Formula::forall(x, std::move(body));
        }
        if (at_word("true") || at_word("false")) return take().text == "true" ? Formula::truth() : Formula::falsity();
        if (at_punct("(")) {
            take();
            Formula f = formula();
            punct(")");
            return f;
        }
        std::string x = var().text;
        if (at_word("in")) {
            take();
            return Formula::in(x, var().text);
        }
        if (at_punct("=")) {
            take();
            return Formula::eq(x, var().text);
        }
        expected("'in' or '='");
    }

    // ---- statements

    Stmt statement() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) expected("a declaration or command");
        if (t.text == "creature" && peek(1).kind == Tok::Ident && peek(1).text == "validate") {
            Stmt s;
            s.loc = take().loc;
            take();
            s.keyword = "creature validate";
            return command_rest(std::move(s));
        }
        if (decl_keywords().count(t.text)) return declaration();
        Stmt s;
        s.loc = t.loc;
        s.keyword = take().text;
        if (!find_command(s.keyword)) fail("E105", s.loc, "unknown command '" + s.keyword + "'");
        return command_rest(std::move(s));
    }

    Stmt command_rest(Stmt s) {
        while (!at_punct(";")) {
            if (peek().kind == Tok::End) expected("';'");
            s.args.push_back(expr());
        }
        take();
        check_command(s);
        return s;
    }

    void check_command(const Stmt& s) const {
        const CommandSpec& spec = *find_command(s.keyword);
        std::vector<const Expr*> pos;
        for (const Expr& e : s.args) {
            if (e.kind == Expr::Kind::Option) {
                auto it = spec.options.find(e.text);
                if (it == spec.options.end()) it = spec.options.find("*");
                if (it == spec.options.end()) fail("E104", e.loc, "'" + s.keyword + "' takes no option '" + e.text + "'");
                check_slot(e.items[0], it->second);
            } else if (e.kind == Expr::Kind::Flag) {
                if (std::find(spec.flags.begin(), spec.flags.end(), e.text) == spec.flags.end())
                    fail("E104", e.loc, "'" + s.keyword + "' takes no flag --" + e.text);
                check_number(e.items[0]);
            } else {
                pos.push_back(&e);
            }
        }
        for (const auto& form : spec.forms) {
            if (form.size() != pos.size()) continue;
            // The first word slot picks the form when forms share an arity.
            if (!form.empty() && form[0].rfind("word:", 0) == 0 && pos[0]->is_ident()) {
                bool listed = false;
                std::stringstream ss(form[0].substr(5));
                for (std::string w; std::getline(ss, w, '|');) listed = listed || w == pos[0]->text;
                const bool later = std::any_of(&form + 1, spec.forms.data() + spec.forms.size(),
                                               [&](const auto& f) { return f.size() == pos.size(); });
                if (!listed && later) continue;
            }
            for (std::size_t k = 0; k < form.size(); ++k) check_slot(*pos[k], form[k]);
            return;
        }
        fail("E106", s.loc, "wrong number of arguments for '" + s.keyword + "'");
    }

    Stmt declaration() {
        Stmt s;
        s.decl = true;
        s.loc = peek().loc;
        s.keyword = take().text;
        Token name = ident("a name to declare");
        s.name = name.text;
        const std::string& kw = s.keyword;
        if (kw == "poset") {
            poset_body(s, name);
            return s;
        }
        if (kw == "formula") {
            punct("=");
            s.formula = formula();
            punct(";");
            bind(name, Kind::Formula);
            return s;
        }
        if (kw == "creature" || kw == "tree") {
            while (!at_punct(";")) {
                if (peek().kind != Tok::Ident || !at_punct("=", 1)) expected("an option key=value");
                s.args.push_back(expr());
            }
            take();
            check_options(s);
            bind(name, kw == "tree" ? Kind::Tree : Kind::Creature);
            return s;
        }
        punct("=");
        if (kw == "prefix") {
            Expr call;
            call.kind = Expr::Kind::Call;
            call.loc = peek().loc;
            call.text = ident("a profile name").text;
            punct("(");
            call.items = items(")", false);
            punct(")");
            s.args.push_back(std::move(call));
        } else {
            s.args.push_back(expr());
        }
        if (kw == "model" && at_word("over")) {
            take();
            Expr p;
            p.loc = peek().loc;
            p.text = ident("a poset name").text;
            require(p, Kind::Poset);
            s.args.push_back(std::move(p));
        }
        punct(";");
        check_value(s);
        static const std::map<std::string, Kind> kinds = {
            {"let", Kind::Term},     {"name", Kind::Term},       {"model", Kind::Model}, {"nep", Kind::Nep},
            {"profile", Kind::Profile}, {"prefix", Kind::Prefix}, {"product", Kind::Product}};
        bind(name, kinds.at(kw));
        return s;
    }

    void poset_body(Stmt& s, const Token& name) {
        punct("{");
        word("elems");
        Expr elems;
        elems.kind = Expr::Kind::Set;
        elems.loc = peek().loc;
        std::set<std::string> listed;
        std::vector<std::pair<Token, bool>> fresh;
        for (;;) {
            Token e = ident("an element name");
            Expr x;
            x.loc = e.loc;
            x.text = e.text;
            if (at_punct("=")) {
                take();
                x.kind = Expr::Kind::Option;
                x.items.push_back(expr());
                check_term(x.items[0]);
                if (script_.bindings.count(e.text)) fail("E103", e.loc, "'" + e.text + "' is already bound");
                fresh.emplace_back(e, true);
            } else {
                auto it = script_.bindings.find(e.text);
                if (it == script_.bindings.end()) fresh.emplace_back(e, false);
                else if (it->second != Kind::Term) require(x, Kind::Term);
            }
            if (!listed.insert(e.text).second) fail("E103", e.loc, "element '" + e.text + "' listed twice");
            elems.items.push_back(std::move(x));
            if (!at_punct(",")) break;
            take();
        }
        punct(";");
        Expr rel;
        rel.kind = Expr::Kind::Set;
        rel.loc = peek().loc;
        if (at_word("le")) {
            take();
            for (;;) {
                Expr pair;
                pair.kind = Expr::Kind::Tuple;
                pair.loc = peek().loc;
                for (int side = 0; side < 2; ++side) {
                    if (side) punct("<=");
                    Token a = ident("an element name");
                    if (!listed.count(a.text)) fail("E102", a.loc, "'" + a.text + "' is not an element of this poset");
                    Expr x;
                    x.loc = a.loc;
                    x.text = a.text;
                    pair.items.push_back(std::move(x));
                }
                rel.items.push_back(std::move(pair));
                if (!at_punct(",")) break;
                take();
            }
            punct(";");
        }
        punct("}");
        s.args = {std::move(elems), std::move(rel)};
        for (const auto& [tok, explicit_value] : fresh) bind(tok, Kind::Term);
        bind(name, Kind::Poset);
    }

    void check_options(const Stmt& s) const {
        std::set<std::string> seen;
        for (const Expr& o : s.args) {
            if (!seen.insert(o.text).second) fail("E103", o.loc, "option '" + o.text + "' given twice");
            const Expr& v = o.items[0];
            if (s.keyword == "creature") {
                if (o.text == "i" || o.text == "width") check_number(v);
                else if (o.text == "val") check_slot(v, "subset");
                else if (o.text == "phi") {
                    if (v.is_ident()) {
                        if (v.text != "log" && v.text != "steep" && v.text != "full" && v.text != "zero")
                            fail("E104", v.loc, "phi is a table or one of log, steep, full, zero");
                    } else if (v.kind == Expr::Kind::Set) {
                        for (const Expr& en : v.items) {
                            if (en.kind != Expr::Kind::Entry) fail("E104", en.loc, "expected subset: value");
                            check_slot(en.items[0], "subset");
                            check_number(en.items[1]);
                        }
                    } else {
                        fail("E104", v.loc, "phi is a table or one of log, steep, full, zero");
                    }
                } else {
                    fail("E104", o.loc, "unknown creature option '" + o.text + "'");
                }
            } else {
                if (o.text == "depth") check_number(v);
                else if (o.text == "nodes") {
                    if (v.is_ident() && v.text == "full") continue;
                    if (v.kind != Expr::Kind::Set) fail("E104", v.loc, "nodes is a set of strings or full");
                    for (const Expr& x : v.items)
                        if (x.kind != Expr::Kind::String) fail("E104", x.loc, "tree nodes are strings");
                } else {
                    fail("E104", o.loc, "unknown tree option '" + o.text + "'");
                }
            }
        }
        for (const char* need : s.keyword == "creature" ? std::vector<const char*>{"i", "val", "phi"}
                                                        : std::vector<const char*>{"depth", "nodes"})
            if (!seen.count(need)) fail("E104", s.loc, std::string("missing option '") + need + "'");
    }

    void check_nep(const Expr& e) const {
        if (e.kind != Expr::Kind::List) fail("E104", e.loc, "expected a parameter [k: [...], ...]");
        std::set<std::uint64_t> keys;
        for (const Expr& en : e.items) {
            if (en.kind != Expr::Kind::Entry) fail("E104", en.loc, "expected k: [...]");
            check_number(en.items[0]);
            if (!keys.insert(en.items[0].number).second) fail("E103", en.items[0].loc, "key given twice");
            check_nep(en.items[1]);
        }
    }

    void check_value(const Stmt& s) const {
        const Expr& v = s.args[0];
        const std::string& kw = s.keyword;
        using EK = Expr::Kind;
        if (kw == "let") return check_term(v);
        if (kw == "name") {
            if (v.kind != EK::Set) fail("E104", v.loc, "a name is a set of pairs (sigma, p)");
            for (const Expr& x : v.items) {
                if (x.kind != EK::Tuple) fail("E104", x.loc, "a name is a set of pairs (sigma, p)");
                check_term(x);
            }
            return;
        }
        if (kw == "model") {
            if (v.kind == EK::Set) {
                for (const Expr& x : v.items) check_term(x);
                return;
            }
            if (v.kind == EK::Call && v.text == "forcing" && (v.items.size() == 2 || v.items.size() == 3)) {
                if (s.args.size() > 1) fail("E104", s.args[1].loc, "a forcing model already names its poset");
                require(v.items[0], Kind::Poset);
                check_number(v.items[1], "the number of ordinals");
                if (v.items.size() == 3) {
                    if (v.items[2].kind != EK::Set) fail("E104", v.items[2].loc, "extra elements form a set");
                    for (const Expr& x : v.items[2].items) check_term(x);
                }
                return;
            }
            fail("E104", v.loc, "a model is {terms} or forcing(P, n[, {terms}])");
        }
        if (kw == "nep") return check_nep(v);
        if (kw == "profile") {
            if (v.kind != EK::Tuple || v.items.empty()) fail("E104", v.loc, "a profile is (F0, F1, ...)");
            for (const Expr& x : v.items) check_number(x);
            return;
        }
        if (kw == "prefix") {
            if (v.kind != EK::Call) fail("E104", v.loc, "a prefix is F(c0, c1, ...)");
            Expr f;
            f.loc = v.loc;
            f.text = v.text;
            require(f, Kind::Profile);
            for (const Expr& x : v.items) require(x, Kind::Creature);
            return;
        }
        if (kw == "product") {
            if (v.kind != EK::Set) fail("E104", v.loc, "a product is {i: T, ...}");
            std::set<std::uint64_t> keys;
            for (const Expr& en : v.items) {
                if (en.kind != EK::Entry) fail("E104", en.loc, "expected i: T");
                check_number(en.items[0]);
                if (!keys.insert(en.items[0].number).second) fail("E103", en.items[0].loc, "index given twice");
                require(en.items[1], Kind::Tree);
            }
        }
    }
};

inline Script parse(const std::string& source) { return Parser(source).parse(); }

struct ParseOutcome {
    std::optional<Script> script;
    std::optional<Diagnostic> error;
};

inline ParseOutcome try_parse(const std::string& source) {
    try {
        return {parse(source), std::nullopt};
    } catch (const ParseError& e) {
        return {std::nullopt, e.diagnostic()};
    }
}

// ---------------------------------------------------------------- printer

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

inline void print_expr(std::ostream& os, const Expr& e) {
    using EK = Expr::Kind;
    auto list = [&](const char* open, const char* close) {
        os << open;
        for (std::size_t k = 0; k < e.items.size(); ++k) {
            if (k) os << ", ";
            print_expr(os, e.items[k]);
        }
        os << close;
    };
    switch (e.kind) {
        case EK::Ident: os << e.text; return;
        case EK::Number: os << e.number; return;
        case EK::String: os << quote(e.text); return;
        case EK::Call: os << e.text; list("(", ")"); return;
        case EK::Set: list("{", "}"); return;
        case EK::Tuple: list("(", ")"); return;
        case EK::List: list("[", "]"); return;
        case EK::Entry:
            print_expr(os, e.items[0]);
            os << ": ";
            print_expr(os, e.items[1]);
            return;
        case EK::Option:
            os << e.text << '=';
            print_expr(os, e.items[0]);
            return;
        case EK::Flag:
            os << "--" << e.text << ' ';
            print_expr(os, e.items[0]);
            return;
    }
}

inline std::string expr_str(const Expr& e) {
    std::ostringstream os;
    print_expr(os, e);
    return os.str();
}

inline std::string print(const Stmt& s) {
    std::ostringstream os;
    os << s.keyword;
    if (!s.decl) {
        for (const Expr& e : s.args) os << ' ' << expr_str(e);
        os << ';';
        return os.str();
    }
    os << ' ' << s.name;
    if (s.keyword == "poset") {
        os << " { elems ";
        for (std::size_t k = 0; k < s.args[0].items.size(); ++k) os << (k ? ", " : "") << expr_str(s.args[0].items[k]);
        os << ';';
        if (!s.args[1].items.empty()) {
            os << " le ";
            for (std::size_t k = 0; k < s.args[1].items.size(); ++k) {
                const Expr& r = s.args[1].items[k];
                os << (k ? ", " : "") << r.items[0].text << " <= " << r.items[1].text;
            }
            os << ';';
        }
        os << " }";
        return os.str();
    }
    if (s.keyword == "formula") {
        os << " = " << s.formula->str() << ';';
        return os.str();
    }
    if (s.keyword == "creature" || s.keyword == "tree") {
        for (const Expr& e : s.args) os << ' ' << expr_str(e);
        os << ';';
        return os.str();
    }
    os << " = " << expr_str(s.args[0]);
    if (s.args.size() > 1) os << " over " << s.args[1].text;
    os << ';';
    return os.str();
}

inline std::string print(const Script& script) {
    std::string out;
    for (const Stmt& s : script.statements) out += print(s) + "\n";
    return out;
}

}  // namespace ordforge::dsl

#endif  // ORDFORGE_DSL_HPP
