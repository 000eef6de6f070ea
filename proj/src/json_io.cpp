#include "bccsp/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace bccsp {

Json to_json(const Alphabet& alphabet) {
    Json names = Json::array();
    for (ActionId a : alphabet.primary()) names.push_back(alphabet.name(a));
    return {{"actions", names}, {"sync", alphabet.sync_mode()}};
}

Alphabet alphabet_from_json(const Json& j) {
    auto names = j.at("actions").get<std::vector<std::string>>();
    bool sync = j.value("sync", false);
    return sync ? Alphabet::sync(names) : Alphabet::interleaving(names);
}

Json to_json(const Lts& lts) {
    Json states = Json::array();
    for (const auto& s : lts.states) states.push_back(render(s));
    Json trans = Json::array();
    for (const auto& [from, a, to] : lts.transitions)
        trans.push_back({render(lts.states[from]), action_name(a), render(lts.states[to])});
    return {{"root", render(lts.states[lts.root])}, {"states", states}, {"transitions", trans}};
}

namespace {

Json trace_json(const Trace& t) {
    Json out = Json::array();
    for (Symbol s : t) out.push_back(action_name(s));
    return out;
}

Json set_json(ActionSet set, const Alphabet& al) {
    Json out = Json::array();
    for (std::size_t i = 0; i < al.universe(); ++i)
        if (set >> i & 1) out.push_back(al.name(static_cast<ActionId>(i)));
    return out;
}

}  // namespace

Json to_json(const ObservationSet& o, const Alphabet& alphabet) {
    Json elems = Json::array();
    switch (o.kind) {
        case ObsKind::F:
        case ObsKind::R:
            for (const auto& [t, set] : o.pairs) elems.push_back({{"trace", trace_json(t)}, {"set", set_json(set, alphabet)}});
            break;
        case ObsKind::FT:
        case ObsKind::RT:
            for (const auto& [t, sets] : o.decorated) {
                Json js = Json::array();
                for (ActionSet s : sets) js.push_back(set_json(s, alphabet));
                elems.push_back({{"trace", trace_json(t)}, {"sets", js}});
            }
            break;
        case ObsKind::PF:
            for (const auto& [t, futures] : o.futures) {
                Json fs = Json::array();
                for (const auto& f : futures) fs.push_back(trace_json(f));
                elems.push_back({{"trace", trace_json(t)}, {"futures", fs}});
            }
            break;
    }
    return {{"kind", to_string(o.kind)}, {"elements", elems}};
}

Json to_json(const FiniteModel& m) {
    Json prefix = Json::object();
    for (const auto& [a, row] : m.prefix) prefix[a] = row;
    return {{"carrier", m.carrier}, {"zero", m.zero}, {"prefix", prefix}, {"plus", m.plus}, {"par", m.par}};
}

FiniteModel model_from_json(const Json& j) {
    FiniteModel m;
    m.carrier = j.at("carrier").get<std::size_t>();
    m.zero = j.value("zero", Element{0});
    for (const auto& [a, row] : j.at("prefix").items()) m.prefix[a] = row.get<std::vector<Element>>();
    m.plus = j.at("plus").get<std::vector<std::vector<Element>>>();
    m.par = j.at("par").get<std::vector<std::vector<Element>>>();
    m.validate();
    return m;
}

Json to_json(const Equation& e) {
    Json j = {{"id", e.id}, {"lhs", render(e.lhs)}, {"rhs", render(e.rhs)}};
    if (!e.schema.empty()) j["schema"] = e.schema;
    return j;
}

Json to_json(const Valuation& v) {
    Json j = Json::object();
    for (const auto& [x, e] : v) j[x] = e;
    return j;
}

Json to_json(const ProofScript& ps) {
    Json steps = Json::array();
    for (const auto& s : ps.steps) {
        Json j = {{"rule", to_string(s.rule)}};
        if (!s.premises.empty()) j["premises"] = s.premises;
        if (!s.axiom.empty()) j["axiom"] = s.axiom;
        if (!s.subst.empty()) {
            Json sub = Json::object();
            for (const auto& [x, t] : s.subst) sub[x] = render(t);
            j["subst"] = sub;
        }
        if (s.context) j["context"] = render(*s.context);
        if (!s.path.empty()) j["path"] = s.path;
        if (s.rule == Rule::CongPrefix) j["action"] = action_name(s.action);
        if (s.term) j["term"] = render(*s.term);
        if (s.lhs) j["lhs"] = render(*s.lhs);
        if (s.rhs) j["rhs"] = render(*s.rhs);
        steps.push_back(j);
    }
    return {{"system", ps.system},
            {"alphabet", to_json(ps.alphabet)},
            {"goal", {{"lhs", render(ps.goal_lhs)}, {"rhs", render(ps.goal_rhs)}}},
            {"steps", steps}};
}

ProofScript proof_from_json(const Json& j) {
    ProofScript ps;
    ps.system = j.at("system").get<std::string>();
    ps.alphabet = alphabet_from_json(j.at("alphabet"));
    auto term = [&](const Json& v) { return parse(v.get<std::string>(), ps.alphabet); };
    ps.goal_lhs = term(j.at("goal").at("lhs"));
    ps.goal_rhs = term(j.at("goal").at("rhs"));
    for (const auto& js : j.at("steps")) {
        ProofStep s;
        s.rule = parse_rule(js.at("rule").get<std::string>());
        if (js.contains("premises")) s.premises = js["premises"].get<std::vector<std::size_t>>();
        s.axiom = js.value("axiom", "");
        if (js.contains("subst"))
            for (const auto& [x, t] : js["subst"].items()) s.subst[x] = term(t);
        if (js.contains("context")) s.context = term(js["context"]);
        if (js.contains("path")) s.path = js["path"].get<Path>();
        if (js.contains("action")) s.action = intern_action(js["action"].get<std::string>());
        if (js.contains("term")) s.term = term(js["term"]);
        if (js.contains("lhs")) s.lhs = term(js["lhs"]);
        if (js.contains("rhs")) s.rhs = term(js["rhs"]);
        ps.steps.push_back(std::move(s));
    }
    return ps;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return Json::parse(in);
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace bccsp
