#ifndef ORDFORGE_RUNNER_HPP
#define ORDFORGE_RUNNER_HPP

// Executes a parsed script statement by statement.  Declarations bind values;
// commands produce report entries.  Any exception raised while executing a
// statement becomes a failing entry carrying the message.

#include <bit>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ordforge/collapse.hpp"
#include "ordforge/dsl.hpp"
#include "ordforge/forcing.hpp"
#include "ordforge/nep.hpp"
#include "ordforge/prefix.hpp"
#include "ordforge/report.hpp"
#include "ordforge/suites.hpp"
#include "ordforge/tree.hpp"

namespace ordforge {

struct RunOptions {
    std::uint64_t size = 3;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> max_carrier;

    std::uint64_t capped(std::uint64_t v) const { return max_carrier ? std::min(v, *max_carrier) : v; }

    /// Reads ORDFORGE_MAX_CARRIER when it holds a positive integer.
    static std::optional<std::uint64_t> max_carrier_from_env() {
        const char* v = std::getenv("ORDFORGE_MAX_CARRIER");
        if (!v || !*v) return std::nullopt;
        char* end = nullptr;
        const unsigned long long n = std::strtoull(v, &end, 10);
        if (*end != '\0' || n == 0) return std::nullopt;
        return n;
    }
};

namespace detail {

template <class T>
std::string show(const T& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

inline std::string show_seq(const Seq& s) {
    std::string out = "(";
    for (std::size_t k = 0; k < s.size(); ++k) out += (k ? ", " : "") + std::to_string(s[k]);
    return out + ")";
}

inline std::string show_nodes(const std::vector<NodeId>& ns) {
    std::string out = "{";
    for (std::size_t k = 0; k < ns.size(); ++k) out += (k ? ", " : "") + dsl::quote(node_to_string(ns[k]));
    return out + "}";
}

inline std::string show_product(const ProductCondition& p) {
    std::string out = "{";
    bool first = true;
    for (const auto& [i, t] : p.trees()) {
        out += (first ? "" : ", ") + std::to_string(i) + ": " + show(t);
        first = false;
    }
    return out + "}";
}

inline std::string show_eta(const Eta& e) {
    std::string out = "{";
    bool first = true;
    for (const auto& [i, t] : e) {
        out += (first ? "" : ", ") + std::to_string(i) + ": " + dsl::quote(node_to_string(t));
        first = false;
    }
    return out + "}";
}

inline std::string show_list(const std::vector<std::size_t>& xs) {
    std::string out = "{";
    for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? ", " : "") + std::to_string(xs[k]);
    return out + "}";
}

inline std::string yes(bool b) { return b ? "true" : "false"; }

}  // namespace detail

class Runner {
public:
    struct ModelValue {
        EpsilonModel model;
        std::optional<SetTerm> poset;
    };
    using Value = std::variant<SetTerm, ModelValue, Poset, Formula, NepParameter, Creature, GrowthProfile,
                               ConditionPrefix, FinTree, ProductCondition>;
    using Handler = Entry (Runner::*)(const dsl::Stmt&);

    explicit Runner(RunOptions opt = {}) : opt_(opt) {}

    Report run(const dsl::Script& script) {
        Report r;
        for (const dsl::Stmt& s : script.statements) execute(s, r.entries);
        return r;
    }

    /// Commands with an implementation, for the coverage test.
    static const std::map<std::string, Handler>& handlers() {
        static const std::map<std::string, Handler> h = {
            {"check", &Runner::cmd_check},
            {"collapse", &Runner::cmd_collapse},
            {"uncollapse", &Runner::cmd_uncollapse},
            {"ordclos", &Runner::cmd_ordclos},
            {"hco", &Runner::cmd_hco},
            {"holds", &Runner::cmd_holds},
            {"mversion", &Runner::cmd_mversion},
            {"generic", &Runner::cmd_generic},
            {"generics", &Runner::cmd_generics},
            {"eval", &Runner::cmd_eval},
            {"forces", &Runner::cmd_forces},
            {"extend", &Runner::cmd_extend},
            {"transfer", &Runner::cmd_transfer},
            {"absolute", &Runner::cmd_absolute},
            {"creature validate", &Runner::cmd_validate},
            {"stronger", &Runner::cmd_stronger},
            {"half", &Runner::cmd_half},
            {"unhalve", &Runner::cmd_unhalve},
            {"join", &Runner::cmd_join},
            {"split", &Runner::cmd_split},
            {"bigness", &Runner::cmd_bigness},
            {"pos", &Runner::cmd_pos},
            {"wedge", &Runner::cmd_wedge},
            {"horizon", &Runner::cmd_horizon},
            {"incomp", &Runner::cmd_incomp},
            {"decide", &Runner::cmd_decide},
            {"front", &Runner::cmd_front},
            {"le-nu", &Runner::cmd_le_nu},
            {"pos-u", &Runner::cmd_pos_u},
            {"wedge-u", &Runner::cmd_wedge_u},
            {"enumerate", &Runner::cmd_enumerate},
        };
        return h;
    }

    /// `suite` expands into several entries and is dispatched separately.
    static bool handles(const std::string& command) { return command == "suite" || handlers().count(command); }

private:
    using Expr = dsl::Expr;
    using Stmt = dsl::Stmt;

    RunOptions opt_;
    std::map<std::string, Value> env_;
    std::map<std::pair<SetTerm, SetTerm>, std::shared_ptr<const ForcingInstance>> instances_;

    static std::string instance_of(const Stmt& s) {
        std::string out;
        for (const Expr& e : s.args) out += (out.empty() ? "" : " ") + dsl::expr_str(e);
        return out;
    }

    void execute(const Stmt& s, std::vector<Entry>& out) {
        try {
            if (s.decl) {
                declare(s, out);
            } else if (s.keyword == "suite") {
                suite(s, out);
            } else {
                Entry e = (this->*handlers().at(s.keyword))(s);
                e.check = s.keyword;
                e.instance = instance_of(s);
                out.push_back(std::move(e));
            }
        } catch (const std::exception& ex) {
            Entry e;
            e.check = s.keyword;
            e.instance = s.decl ? s.name : instance_of(s);
            e.holds = false;
            e.error = ex.what();
            out.push_back(std::move(e));
        }
    }

    // ------------------------------------------------------------ values

    template <class T>
    const T& get(const std::string& name) const {
        auto it = env_.find(name);
        if (it == env_.end()) throw Error("'" + name + "' has no value because its declaration failed");
        const T* v = std::get_if<T>(&it->second);
        if (!v) throw Error("'" + name + "' holds a value of another kind");
        return *v;
    }
    template <class T>
    const T& get(const Expr& e) const { return get<T>(e.text); }

    SetTerm term(const Expr& e) const {
        switch (e.kind) {
            case Expr::Kind::Ident: {
                auto it = env_.find(e.text);
                if (it != env_.end())
                    if (const auto* m = std::get_if<ModelValue>(&it->second)) return m->model.as_term();
                return get<SetTerm>(e);
            }
            case Expr::Kind::Call: return SetTerm::ord(static_cast<std::uint32_t>(e.items[0].number));
            case Expr::Kind::Set: {
                std::vector<SetTerm> es;
                for (const Expr& x : e.items) es.push_back(term(x));
                return SetTerm::node(std::move(es));
            }
            case Expr::Kind::Tuple: return make_pair_term(term(e.items[0]), term(e.items[1]));
            default: throw Error("not a term: " + dsl::expr_str(e));
        }
    }

    static std::uint32_t num(const Expr& e) { return static_cast<std::uint32_t>(e.number); }

    static SubsetMask subset(const Expr& e) {
        SubsetMask m = 0;
        for (const Expr& x : e.items) {
            if (x.number >= 64) throw Error("subset element " + std::to_string(x.number) + " exceeds 63");
            m |= SubsetMask{1} << x.number;
        }
        return m;
    }

    static Seq seq(const Expr& e) {
        Seq s;
        for (const Expr& x : e.items) s.push_back(num(x));
        return s;
    }

    static std::vector<const Expr*> positional(const Stmt& s) {
        std::vector<const Expr*> out;
        for (const Expr& e : s.args)
            if (e.kind != Expr::Kind::Option && e.kind != Expr::Kind::Flag) out.push_back(&e);
        return out;
    }

    static const Expr* option(const Stmt& s, const std::string& key) {
        for (const Expr& e : s.args)
            if ((e.kind == Expr::Kind::Option || e.kind == Expr::Kind::Flag) && e.text == key) return &e.items[0];
        return nullptr;
    }

    const EpsilonModel& model(const Expr& e) const { return get<ModelValue>(e).model; }

    std::vector<SetTerm> filter(const Expr& e) const {
        SetTerm g = term(e);
        if (g.is_ord()) throw Error("a filter is a set of conditions, not an ordinal");
        return g.members();
    }

    const ForcingInstance& instance(const EpsilonModel& m, const SetTerm& p) {
        auto key = std::make_pair(m.as_term(), p);
        auto it = instances_.find(key);
        if (it == instances_.end()) it = instances_.emplace(key, std::make_shared<const ForcingInstance>(m, p)).first;
        return *it->second;
    }

    // ----------------------------------------------------- declarations

    void declare(const Stmt& s, std::vector<Entry>& out) {
        const std::string& kw = s.keyword;
        const Expr* v = s.args.empty() ? nullptr : &s.args[0];
        if (kw == "let" || kw == "name") {
            env_[s.name] = term(*v);
        } else if (kw == "model") {
            declare_model(s);
        } else if (kw == "poset") {
            declare_poset(s);
        } else if (kw == "formula") {
            env_.emplace(s.name, *s.formula);
        } else if (kw == "nep") {
            env_[s.name] = nep(*v);
        } else if (kw == "creature") {
            declare_creature(s, out);
        } else if (kw == "profile") {
            std::vector<std::uint32_t> f;
            for (const Expr& x : v->items) f.push_back(num(x));
            env_[s.name] = GrowthProfile(std::move(f));
        } else if (kw == "prefix") {
            std::vector<Creature> cs;
            for (const Expr& x : v->items) cs.push_back(get<Creature>(x));
            env_[s.name] = ConditionPrefix(get<GrowthProfile>(v->text), std::move(cs));
        } else if (kw == "tree") {
            const std::uint32_t depth = num(*option(s, "depth"));
            const Expr& nodes = *option(s, "nodes");
            if (nodes.is_ident()) {
                env_[s.name] = FinTree::full(depth);
            } else {
                std::vector<std::string> ns;
                for (const Expr& x : nodes.items) ns.push_back(x.text);
                env_[s.name] = FinTree::from_strings(depth, ns);
            }
        } else if (kw == "product") {
            std::map<std::uint32_t, FinTree> trees;
            for (const Expr& en : v->items)
                if (!trees.emplace(num(en.items[0]), get<FinTree>(en.items[1])).second)
                    throw Error("index " + std::to_string(en.items[0].number) + " given twice");
            env_[s.name] = ProductCondition(std::move(trees));
        }
    }

    void declare_model(const Stmt& s) {
        const Expr& v = s.args[0];
        ModelValue mv;
        if (v.kind == Expr::Kind::Set) {
            std::vector<SetTerm> es;
            for (const Expr& x : v.items) es.push_back(term(x));
            mv.model = EpsilonModel(std::move(es));
            if (s.args.size() > 1) mv.poset = get<Poset>(s.args[1]).encode();
        } else {
            const Poset& p = get<Poset>(v.items[0]);
            std::vector<std::uint32_t> on;
            for (std::uint32_t k = 0; k < num(v.items[1]); ++k) on.push_back(k);
            std::vector<SetTerm> extra;
            if (v.items.size() == 3)
                for (const Expr& x : v.items[2].items) extra.push_back(term(x));
            mv.model = forcing_model(p, on, extra);
            mv.poset = p.encode();
        }
        if (opt_.max_carrier && mv.model.size() > *opt_.max_carrier)
            throw Error("model has " + std::to_string(mv.model.size()) + " elements, above ORDFORGE_MAX_CARRIER");
        env_[s.name] = std::move(mv);
    }

    /// Elements without a value are bound to {ord(2k+2)}, k their position.
    void declare_poset(const Stmt& s) {
        std::map<std::string, SetTerm> value;
        std::vector<SetTerm> elems;
        const auto& listed = s.args[0].items;
        for (std::size_t k = 0; k < listed.size(); ++k) {
            const Expr& x = listed[k];
            SetTerm t;
            if (x.kind == Expr::Kind::Option) t = term(x.items[0]);
            else if (env_.count(x.text)) t = get<SetTerm>(x);
            else t = SetTerm::node({SetTerm::ord(static_cast<std::uint32_t>(2 * k + 2))});
            for (const auto& [other, u] : value)
                if (u == t) throw Error("elements '" + other + "' and '" + x.text + "' denote the same term");
            value.emplace(x.text, t);
            elems.push_back(t);
        }
        std::vector<std::pair<SetTerm, SetTerm>> le;
        for (const Expr& r : s.args[1].items) le.emplace_back(value.at(r.items[0].text), value.at(r.items[1].text));
        Poset p(std::move(elems), le);
        for (const auto& [n, t] : value) env_.try_emplace(n, t);
        env_[s.name] = std::move(p);
    }

    static NepParameter nep(const Expr& e) {
        NepParameter p;
        for (const Expr& en : e.items)
            if (!p.values.emplace(num(en.items[0]), nep(en.items[1])).second)
                throw Error("parameter key " + std::to_string(en.items[0].number) + " given twice");
        return p;
    }

    /// Omitted table entries take the least value monotonicity allows: the
    /// largest given value on a subset, or 0.
    void declare_creature(const Stmt& s, std::vector<Entry>& out) {
        const SubsetMask val = subset(*option(s, "val"));
        if (val == 0) throw Error("creature value set is empty");
        const std::uint32_t width = option(s, "width") ? num(*option(s, "width")) : static_cast<std::uint32_t>(std::bit_width(val));
        const std::uint32_t index = num(*option(s, "i"));
        const Expr& phi = *option(s, "phi");
        bool completed = false;
        Creature c;
        if (phi.is_ident()) {
            c = Creature::from_function(index, width, val, [&](SubsetMask b) -> std::uint32_t {
                const std::uint32_t n = static_cast<std::uint32_t>(popcount(b));
                if (phi.text == "zero" || n == 0) return 0;
                if (phi.text == "full") return n;
                if (phi.text == "log") return static_cast<std::uint32_t>(std::bit_width(n)) - 1;
                return static_cast<std::uint32_t>(std::bit_width(n - 1)) + 1;
            });
        } else {
            std::map<SubsetMask, std::uint32_t> given;
            for (const Expr& en : phi.items) {
                const SubsetMask b = subset(en.items[0]);
                if (!subset_of(b, val)) throw Error("phi" + subset_str(b) + " lies outside val");
                if (!given.emplace(b, num(en.items[1])).second) throw Error("phi" + subset_str(b) + " given twice");
            }
            c = Creature::from_function(index, width, val, [&](SubsetMask b) -> std::uint32_t {
                if (auto it = given.find(b); it != given.end()) return it->second;
                completed = true;
                std::uint32_t v = 0;
                for (const auto& [g, x] : given)
                    if (subset_of(g, b)) v = std::max(v, x);
                return v;
            });
        }
        if (completed)
            if (auto bad = validate(c)) {
                Entry e;
                e.check = "lint creature";
                e.instance = s.name;
                e.holds = false;
                e.result = "the completed table is not a creature";
                e.witness = bad->describe();
                out.push_back(std::move(e));
            }
        env_[s.name] = std::move(c);
    }

    // ------------------------------------------------- kernel commands

    Entry cmd_check(const Stmt& s) {
        auto a = positional(s);
        const std::string& prop = a[0]->text;
        const EpsilonModel& m = model(*a[1]);
        Entry e;
        if (prop == "forcing-ready") {
            std::string why = forcing_ready_violation(instance(m, get<Poset>(*a[2]).encode()));
            e.holds = why.empty();
            if (!e.holds) e.witness = why;
        } else if (prop == "ord-absolute" || prop == "ord-transitive") {
            e.holds = prop == "ord-absolute" ? is_ord_absolute(m) : is_ord_transitive(m);
            auto imp = ordinal_impostors(m);
            if (!imp.empty()) e.witness = "internal ordinal " + imp.front().str();
            else if (!e.holds) e.witness = first_unclosed(m);
        } else if (prop == "ord-closed") {
            e.holds = is_ord_closed(m);
            if (!e.holds) e.witness = first_unclosed(m);
        } else if (prop == "transitive") {
            e.holds = is_transitive(m);
        } else if (prop == "extensional") {
            e.holds = is_extensional(m);
        } else {
            e.holds = is_successor_absolute(m);
        }
        e.result = detail::yes(e.holds);
        return e;
    }

    static std::string first_unclosed(const EpsilonModel& m) {
        for (const SetTerm& x : m.elements())
            if (x.is_node())
                for (const SetTerm& y : x.elements())
                    if (!m.contains(y)) return y.str() + " in " + x.str() + " is missing";
        return {};
    }

    Entry cmd_collapse(const Stmt& s) {
        auto a = positional(s);
        const std::string mode = a.size() == 2 ? a[0]->text : "ord";
        const EpsilonModel& m = model(*a.back());
        Entry e;
        if (mode == "labeled") {
            LabeledModel l = labeled_collapse(m);
            e.holds = is_valid_labeled(l);
            e.result = detail::show(l.carrier);
            std::string lab;
            for (std::size_t k = 0; k < l.label.size(); ++k)
                lab += (k ? ", " : "") + std::to_string(k) + " -> " + std::to_string(l.label[k]);
            e.details.push_back("label: {" + lab + "}");
            if (!e.holds) e.witness = labeled_model_violation(l);
            return e;
        }
        CollapseResult r = mode == "ord" ? ord_collapse(m) : transitive_collapse(m);
        e.holds = r.image.size() == m.size() && (mode == "ord" ? is_ord_transitive(r.image) : is_transitive(r.image));
        e.result = detail::show(r.image);
        for (const SetTerm& x : m.elements())
            if (r(x) != x) e.details.push_back(x.str() + " -> " + r(x).str());
        return e;
    }

    Entry cmd_uncollapse(const Stmt& s) {
        const EpsilonModel& m = model(*positional(s)[0]);
        Entry e;
        EpsilonModel u = uncollapse(labeled_collapse(m));
        e.holds = u == ord_collapse(m).image;
        e.result = detail::show(u);
        return e;
    }

    Entry cmd_ordclos(const Stmt& s) {
        Entry e;
        e.result = SetTerm::node(ordclos(term(*positional(s)[0]))).str();
        return e;
    }

    Entry cmd_hco(const Stmt& s) {
        const Expr* alpha = option(s, "alpha");
        const Expr* bound = option(s, "bound");
        if (!alpha || !bound) throw Error("hco needs alpha=... and bound=...");
        SetTerm x = term(*positional(s)[0]);
        Entry e;
        e.holds = hco_check(x, num(*alpha), num(*bound));
        e.result = detail::yes(e.holds);
        e.details.push_back("rank " + std::to_string(x.rank()) + ", |ordclos| " + std::to_string(ordclos(x).size()));
        return e;
    }

    Assignment assignment(const Stmt& s) const {
        Assignment a;
        for (const Expr& x : s.args)
            if (x.kind == Expr::Kind::Option) a.emplace(x.text, term(x.items[0]));
        return a;
    }

    Entry cmd_holds(const Stmt& s) {
        auto a = positional(s);
        Entry e;
        e.holds = eval_formula(get<Formula>(*a[0]), model(*a[1]), assignment(s));
        e.result = detail::yes(e.holds);
        return e;
    }

    Entry cmd_mversion(const Stmt& s) {
        auto a = positional(s);
        NepParameter v = m_version(get<NepParameter>(*a[0]), model(*a[1]));
        Entry e;
        e.holds = is_nep_parameter(v);
        e.result = detail::show(v);
        return e;
    }

    // ------------------------------------------------ forcing commands

    Entry cmd_generic(const Stmt& s) {
        auto a = positional(s);
        Entry e;
        e.holds = is_generic(filter(*a[0]), model(*a[1]), get<Poset>(*a[2]).encode());
        e.result = detail::yes(e.holds);
        return e;
    }

    Entry cmd_generics(const Stmt& s) {
        auto a = positional(s);
        const ForcingInstance& inst = instance(model(*a[0]), get<Poset>(*a[1]).encode());
        std::vector<SetTerm> gs;
        for (Mask g : inst.generics()) gs.push_back(SetTerm::node(inst.poset().to_terms(g)));
        gs = sorted(std::move(gs));
        Entry e;
        e.holds = !gs.empty();
        e.result = std::to_string(gs.size()) + " generic filter" + (gs.size() == 1 ? "" : "s");
        for (const SetTerm& g : gs) e.details.push_back(g.str());
        return e;
    }

    Entry cmd_eval(const Stmt& s) {
        auto a = positional(s);
        const ModelValue& mv = get<ModelValue>(*a[2]);
        if (!mv.poset) throw Error("model '" + a[2]->text + "' was not declared over a poset");
        const SetTerm tau = term(*a[0]);
        const auto g = filter(*a[1]);
        const SetTerm in_m = instance(mv.model, *mv.poset).eval(tau, g);
        const SetTerm via = eval_name_via_collapse(tau, g, mv.model);
        Entry e;
        e.holds = in_m == via;
        e.result = in_m.str();
        e.details.push_back("via collapse: " + via.str());
        e.details.push_back("in V: " + eval_name_V(tau, g).str());
        return e;
    }

    Entry cmd_forces(const Stmt& s) {
        auto a = positional(s);
        const ForcingInstance& inst = instance(model(*a[0]), get<Poset>(*a[1]).encode());
        const SetTerm p = term(*a[2]);
        auto idx = inst.poset().index(p);
        if (!idx) throw Error(p.str() + " is not a condition of the poset");
        Entry e;
        e.holds = inst.forces(*idx, get<Formula>(*a[3]), assignment(s));
        e.result = detail::yes(e.holds);
        return e;
    }

    Entry cmd_extend(const Stmt& s) {
        auto a = positional(s);
        const EpsilonModel& m = model(*a[0]);
        const ForcingInstance& inst = instance(m, get<Poset>(*a[1]).encode());
        const Mask g = inst.poset().to_mask(filter(*a[2]));
        if (!inst.is_generic(g)) throw Error("the filter is not generic over the model");
        const EpsilonModel& ext = inst.extension(g);
        Entry e;
        e.holds = is_ord_transitive(ext) && ext.ordinals() == m.ordinals();
        e.result = detail::show(ext);
        e.details.push_back("ord-transitive: " + detail::yes(is_ord_transitive(ext)));
        e.details.push_back("same ordinals: " + detail::yes(ext.ordinals() == m.ordinals()));
        return e;
    }

    Entry cmd_transfer(const Stmt& s) {
        auto a = positional(s);
        TransferResult r = genericity_transfer(model(*a[0]), get<Poset>(*a[1]).encode(), filter(*a[2]));
        Entry e;
        e.holds = r.generic_over_n == r.generic_over_image && (!r.identity_applies || r.identity_on_p);
        e.result = "generic over N: " + detail::yes(r.generic_over_n) + ", over i[N]: " + detail::yes(r.generic_over_image);
        e.details.push_back("collapse is the identity on P: " + detail::yes(r.identity_on_p));
        return e;
    }

    Entry cmd_absolute(const Stmt& s) {
        auto a = positional(s);
        AbsolutenessResult r = eval_absoluteness_check(model(*a[0]), model(*a[1]), get<Poset>(*a[2]).encode(),
                                                       filter(*a[3]), term(*a[4]));
        Entry e;
        e.holds = r.holds();
        e.result = detail::yes(e.holds);
        e.details.push_back("genericity agrees: " + detail::yes(r.generic_agrees));
        e.details.push_back("value agrees: " + detail::yes(r.value_agrees));
        e.details.push_back("ord-transitivity agrees: " + detail::yes(r.ord_transitive_agrees));
        return e;
    }

    // ----------------------------------------------- creature commands

    Entry cmd_validate(const Stmt& s) {
        const Creature& c = get<Creature>(*positional(s)[0]);
        Entry e;
        auto v = validate(c);
        e.holds = !v;
        e.result = v ? "invalid" : "valid";
        if (v) e.witness = v->describe();
        return e;
    }

    Entry cmd_stronger(const Stmt& s) {
        auto a = positional(s);
        Entry e;
        e.holds = stronger(get<Creature>(*a[0]), get<Creature>(*a[1]));
        e.result = detail::yes(e.holds);
        return e;
    }

    Entry cmd_half(const Stmt& s) {
        const Creature& c = get<Creature>(*positional(s)[0]);
        Creature h = half(c);
        Entry e;
        e.holds = is_valid(h) && stronger(h, c);
        e.result = detail::show(h);
        return e;
    }

    Entry cmd_unhalve(const Stmt& s) {
        auto a = positional(s);
        const Creature& c = get<Creature>(*a[1]);
        Creature r = unhalve(get<Creature>(*a[0]), c);
        Entry e;
        e.holds = is_valid(r) && stronger(r, c);
        e.result = detail::show(r);
        return e;
    }

    Entry cmd_join(const Stmt& s) {
        auto a = positional(s);
        const Creature& c0 = get<Creature>(*a[0]);
        const Creature& c1 = get<Creature>(*a[1]);
        Entry e;
        auto j = join(c0, c1);
        if (!j) {
            e.result = "disjoint value sets";
            return e;
        }
        e.holds = is_valid(*j) && stronger(*j, c0) && stronger(*j, c1);
        e.result = detail::show(*j);
        return e;
    }

    Entry cmd_split(const Stmt& s) {
        auto a = positional(s);
        const Creature& c0 = get<Creature>(*a[0]);
        const Creature& c1 = get<Creature>(*a[1]);
        const SubsetMask b = subset(*a[2]);
        auto [b0, b1] = split_decomposition(c0, c1, b);
        Entry e;
        e.holds = (b0 | b1) == b && (*join(c0, c1))(b) >= std::max(c0(b0), c1(b1));
        e.result = "b0 = " + subset_str(b0) + ", b1 = " + subset_str(b1);
        return e;
    }

    Entry cmd_bigness(const Stmt& s) {
        auto a = positional(s);
        const Creature& c = get<Creature>(*a[0]);
        const SubsetMask ones = subset(*a[1]);
        Creature r = bigness_refine(c, ones);
        Entry e;
        const bool constant = (r.val() & ones) == 0 || (r.val() & ~ones) == 0;
        e.holds = stronger(r, c) && r.nor() + 1 >= c.nor() && constant;
        e.result = detail::show(r);
        return e;
    }

    Entry cmd_pos(const Stmt& s) {
        auto a = positional(s);
        auto ps = pos(get<ConditionPrefix>(*a[0]), num(*a[1]));
        Entry e;
        e.result = std::to_string(ps.size()) + " possibilities";
        for (const Seq& x : ps) e.details.push_back(detail::show_seq(x));
        return e;
    }

    Entry cmd_wedge(const Stmt& s) {
        auto a = positional(s);
        const ConditionPrefix& p = get<ConditionPrefix>(*a[0]);
        ConditionPrefix w = wedge(p, seq(*a[1]));
        Entry e;
        e.holds = le(w, p);
        e.result = "trunk " + detail::show_seq(w.trunk());
        for (const Creature& c : w.creatures()) e.details.push_back(detail::show(c));
        return e;
    }

    static void horizon_details(const HorizonVerdict& v, Entry& e) {
        e.details.push_back("finite-horizon approximation");
        if (!v.disjoint.empty()) e.details.push_back("disjoint value sets at " + detail::show_list(v.disjoint));
        for (const HorizonLevel& l : v.levels)
            e.details.push_back("M=" + std::to_string(l.M) + ": low " + detail::show_list(l.low) + ", witnesses " +
                                detail::show_list(l.witnesses));
    }

    Entry cmd_horizon(const Stmt& s) {
        auto a = positional(s);
        HorizonVerdict v = incompat_horizon(get<ConditionPrefix>(*a[0]), get<ConditionPrefix>(*a[1]), num(*a[2]));
        Entry e;
        e.result = to_string(v.kind);
        horizon_details(v, e);
        return e;
    }

    Entry cmd_incomp(const Stmt& s) {
        auto a = positional(s);
        const ConditionPrefix& p = get<ConditionPrefix>(*a[0]);
        const std::uint64_t bound = a.size() > 1 ? num(*a[1]) : 3;
        HalvingPair hp = halving_incompatible(p);
        HorizonVerdict v = incompat_horizon(hp.r, hp.q, bound);
        Entry e;
        e.holds = le(hp.r, p) && v.kind != HorizonKind::NoWitness;
        e.result = to_string(v.kind);
        for (std::size_t n = 0; n < hp.a.size(); ++n)
            e.details.push_back("a_" + std::to_string(n) + " = " + (hp.a[n] ? subset_str(*hp.a[n]) : std::string("none")));
        for (const Creature& c : hp.r.creatures()) e.details.push_back("r: " + detail::show(c));
        horizon_details(v, e);
        return e;
    }

    Entry cmd_decide(const Stmt& s) {
        auto a = positional(s);
        const ConditionPrefix& p = get<ConditionPrefix>(*a[0]);
        const std::size_t h0 = num(*a[1]), n = num(*a[2]);
        std::set<Seq> lambda;
        for (const Expr& x : a[3]->items) lambda.insert(seq(x));
        PureDecision d = pure_decision_core(p, h0, n, lambda);
        std::vector<Creature> cs = p.creatures();
        for (const DecisionLevel& l : d.levels) cs[l.h] = l.phi;
        ConditionPrefix refined(p.profile(), cs);
        Entry e;
        bool homogeneous = true, small_loss = true;
        for (const DecisionLevel& l : d.levels) {
            small_loss = small_loss && stronger(l.phi, p[l.h]) && l.phi.nor() + l.refinements >= p[l.h].nor();
            for (const Seq& x : pos(refined, l.h)) {
                std::size_t in = 0;
                for (std::uint32_t v : elements_of(l.phi.val())) {
                    Seq t = x;
                    t.push_back(v);
                    in += d.lambda(l.h + 1).count(t);
                }
                const bool all = in == l.phi.val_size();
                homogeneous = homogeneous && (in == 0 || all) && (all == (l.lambda.count(x) > 0));
            }
            std::string members;
            for (const Seq& x : l.lambda) members += (members.empty() ? "" : ", ") + detail::show_seq(x);
            e.details.push_back("h=" + std::to_string(l.h) + ": " + std::to_string(l.refinements) + " refinements, nor " +
                                std::to_string(p[l.h].nor()) + " -> " + std::to_string(l.phi.nor()) + ", Lambda {" +
                                members + "}");
        }
        e.holds = homogeneous && small_loss;
        e.result = "|Lambda_" + std::to_string(h0) + "| = " + std::to_string(d.lambda(h0).size());
        return e;
    }

    // --------------------------------------------------- tree commands

    Entry cmd_front(const Stmt& s) {
        auto a = positional(s);
        const FinTree& t = get<FinTree>(*a[0]);
        auto f = splitting_front(t, num(*a[1]));
        Entry e;
        e.holds = is_antichain(f) && is_front(t, f);
        e.result = detail::show_nodes(f);
        return e;
    }

    Entry cmd_le_nu(const Stmt& s) {
        auto a = positional(s);
        std::set<std::uint32_t> u;
        for (const Expr& x : a[3]->items) u.insert(num(x));
        Entry e;
        e.holds = le_nu(get<ProductCondition>(*a[0]), get<ProductCondition>(*a[1]), num(*a[2]), u);
        e.result = detail::yes(e.holds);
        return e;
    }

    Entry cmd_pos_u(const Stmt& s) {
        auto a = positional(s);
        std::set<std::uint32_t> u;
        for (const Expr& x : a[2]->items) u.insert(num(x));
        auto etas = pos_u(get<ProductCondition>(*a[0]), num(*a[1]), u);
        Entry e;
        e.result = std::to_string(etas.size()) + " tuples";
        for (const Eta& x : etas) e.details.push_back(detail::show_eta(x));
        return e;
    }

    Entry cmd_wedge_u(const Stmt& s) {
        auto a = positional(s);
        const ProductCondition& p = get<ProductCondition>(*a[0]);
        Eta eta;
        for (const Expr& en : a[1]->items) eta[num(en.items[0])] = node_from_string(en.items[1].text);
        ProductCondition w = wedge_u(p, eta);
        Entry e;
        e.holds = le(w, p);
        e.result = detail::show_product(w);
        return e;
    }

    // ------------------------------------------------------ enumeration

    Entry cmd_enumerate(const Stmt& s) {
        const std::string what = positional(s)[0]->text;
        Entry e;
        if (what == "creatures") {
            const Expr* w = option(s, "width");
            if (!w) throw Error("enumerate creatures needs width=...");
            const std::uint32_t width = num(*w);
            if (width > 5 || width != opt_.capped(width)) throw Error("width above the enumeration cap");
            const std::uint32_t index = option(s, "index") ? num(*option(s, "index")) : 0;
            std::map<std::pair<std::size_t, std::uint32_t>, std::size_t> hist;
            auto all = enumerate_creatures(index, width);
            for (const Creature& c : all) ++hist[{c.val_size(), c.nor()}];
            e.result = std::to_string(all.size()) + " creatures";
            e.details.push_back("val_size,nor,count");
            for (const auto& [k, n] : hist)
                e.details.push_back(std::to_string(k.first) + "," + std::to_string(k.second) + "," + std::to_string(n));
            return e;
        }
        const Expr* d = option(s, "depth");
        if (!d) throw Error("enumerate trees needs depth=...");
        const std::uint32_t depth = num(*d);
        if (depth > 4 || depth != opt_.capped(depth)) throw Error("depth above the enumeration cap");
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> hist;
        auto all = enumerate_trees(depth);
        for (const FinTree& t : all) {
            std::size_t splits = 0;
            for (NodeId x : t.nodes()) splits += t.splitting(x);
            ++hist[{t.leaves().size(), splits}];
        }
        e.result = std::to_string(all.size()) + " trees";
        e.details.push_back("leaves,splitting_nodes,count");
        for (const auto& [k, n] : hist)
            e.details.push_back(std::to_string(k.first) + "," + std::to_string(k.second) + "," + std::to_string(n));
        return e;
    }

    void suite(const Stmt& s, std::vector<Entry>& out) {
        suites::Params prm;
        prm.size = opt_.capped(option(s, "size") ? option(s, "size")->number : opt_.size);
        prm.seed = option(s, "seed") ? option(s, "seed")->number : opt_.seed;
        for (Entry& e : suites::run(positional(s)[0]->text, prm)) out.push_back(std::move(e));
    }
};

/// Parses and runs; a parse failure throws dsl::ParseError.
inline Report run_source(const std::string& source, const RunOptions& opt = {}) {
    return Runner(opt).run(dsl::parse(source));
}

}  // namespace ordforge

#endif  // ORDFORGE_RUNNER_HPP
