#include "winmdp/parser.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <vector>

namespace winmdp {

namespace {

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::optional<long long> parse_ll(const std::string& text) {
    long long v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size()) return std::nullopt;
    return v;
}

}  // namespace

Mdp parse_model(std::string_view text) {
    std::optional<MdpBuilder> builder;
    std::string pending_state, pending_action;
    bool seen_header = false;

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        std::string_view line = raw.substr(0, std::min(raw.find('#'), raw.size()));
        bool indented = !line.empty() && (line[0] == ' ' || line[0] == '\t');
        auto tokens = tokenize(line);
        if (tokens.empty()) {
            if (pos > text.size()) break;
            continue;
        }

        if (!seen_header) {
            if (tokens.size() != 2 || tokens[0] != "mdp" ||
                (tokens[1] != "mp" && tokens[1] != "par"))
                throw ModelError(ModelErrorCode::SyntaxError,
                                 "expected header 'mdp mp' or 'mdp par'", line_no);
            builder.emplace(tokens[1] == "mp" ? LabelKind::MeanPayoff : LabelKind::Parity);
            seen_header = true;
            continue;
        }

        if (indented) {
            if (pending_action.empty())
                throw ModelError(ModelErrorCode::SyntaxError,
                                 "successor line outside an action block", line_no);
            if (tokens.size() != 2)
                throw ModelError(ModelErrorCode::SyntaxError,
                                 "expected '<state> <num>/<den>'", line_no);
            auto prob = parse_rational(tokens[1]);
            if (!prob)
                throw ModelError(ModelErrorCode::SyntaxError,
                                 "malformed probability '" + tokens[1] + "'", line_no);
            builder->add_successor(pending_state, pending_action, tokens[0], *prob, line_no);
            continue;
        }

        if (tokens[0] == "state") {
            pending_action.clear();
            if (tokens.size() == 2) {
                builder->add_state(tokens[1], -1, line_no);
            } else if (tokens.size() == 4 && tokens[2] == "priority") {
                auto prio = parse_ll(tokens[3]);
                if (!prio || *prio < 0)
                    throw ModelError(ModelErrorCode::NegativePriority,
                                     "priority must be a natural number", line_no);
                builder->add_state(tokens[1], static_cast<int>(*prio), line_no);
            } else {
                throw ModelError(ModelErrorCode::SyntaxError,
                                 "expected 'state <id> [priority <nat>]'", line_no);
            }
            continue;
        }
        if (tokens[0] == "action") {
            if (tokens.size() == 3) {
                builder->add_action(tokens[1], tokens[2], std::nullopt, line_no);
            } else if (tokens.size() == 5 && tokens[3] == "weight") {
                auto w = parse_ll(tokens[4]);
                if (!w)
                    throw ModelError(ModelErrorCode::SyntaxError,
                                     "malformed weight '" + tokens[4] + "'", line_no);
                builder->add_action(tokens[1], tokens[2], *w, line_no);
            } else {
                throw ModelError(ModelErrorCode::SyntaxError,
                                 "expected 'action <state> <id> [weight <int>]'", line_no);
            }
            pending_state = tokens[1];
            pending_action = tokens[2];
            continue;
        }
        throw ModelError(ModelErrorCode::SyntaxError, "unrecognized directive '" + tokens[0] +
                                                          "'",
                         line_no);
    }
    if (!seen_header)
        throw ModelError(ModelErrorCode::SyntaxError, "missing 'mdp mp' or 'mdp par' header");
    return std::move(*builder).build();
}

std::string print_model(const Mdp& m) {
    std::ostringstream out;
    bool mp = m.kind() == LabelKind::MeanPayoff;
    out << "mdp " << to_string(m.kind()) << "\n";
    for (int s = 0; s < m.state_count(); ++s) {
        out << "state " << m.state_name(s);
        if (!mp) out << " priority " << m.priority(s);
        out << "\n";
    }
    for (int s = 0; s < m.state_count(); ++s)
        for (int a : m.enabled(s)) {
            out << "action " << m.state_name(s) << " " << m.action_name(a);
            if (mp) out << " weight " << m.weight(a);
            out << "\n";
            for (const auto& [t, p] : m.dist(s, a).support)
                out << "  " << m.state_name(t) << " " << rat_str(p) << "\n";
        }
    return out.str();
}

std::string model_hash(const Mdp& m) {
    std::string text = print_model(m);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace winmdp
