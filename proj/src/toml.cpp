#include "nilact/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace nilact {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    nlohmann::json parse() {
        nlohmann::json root = nlohmann::json::object();
        nlohmann::json* current = &root;
        while (!eof()) {
            skip_ws_and_comments();
            if (eof()) break;
            if (peek() == '[') {
                current = parse_header(root);
            } else {
                parse_key_value(*current);
            }
            skip_spaces();
            if (!eof() && peek() == '#') skip_comment();
            if (!eof() && peek() != '\n')
                fail("expected end of line");
        }
        return root;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char get() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw TomlError(msg, line_, col_); }

    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
    }
    void skip_comment() {
        while (!eof() && peek() != '\n') get();
    }
    void skip_ws_and_comments() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') get();
            else if (c == '#') skip_comment();
            else break;
        }
    }

    std::string parse_bare_key() {
        std::string key;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
                key.push_back(get());
            else
                break;
        }
        if (key.empty()) fail("expected a key");
        return key;
    }

    std::vector<std::string> parse_dotted_key() {
        std::vector<std::string> parts{parse_bare_key()};
        while (!eof() && peek() == '.') {
            get();
            parts.push_back(parse_bare_key());
        }
        return parts;
    }

    // [table] or [[array of tables]]
    nlohmann::json* parse_header(nlohmann::json& root) {
        get(); // '['
        bool array_table = !eof() && peek() == '[';
        if (array_table) get();
        skip_spaces();
        auto parts = parse_dotted_key();
        skip_spaces();
        if (eof() || get() != ']') fail("expected ']'");
        if (array_table && (eof() || get() != ']')) fail("expected ']]'");

        nlohmann::json* node = &root;
        for (size_t i = 0; i < parts.size(); ++i) {
            const std::string& key = parts[i];
            bool last = i + 1 == parts.size();
            if (last && array_table) {
                if (!node->contains(key)) (*node)[key] = nlohmann::json::array();
                if (!(*node)[key].is_array()) fail("'" + key + "' is not an array of tables");
                (*node)[key].push_back(nlohmann::json::object());
                node = &(*node)[key].back();
            } else {
                if (!node->contains(key)) (*node)[key] = nlohmann::json::object();
                nlohmann::json& next = (*node)[key];
                if (next.is_array()) node = &next.back();
                else if (next.is_object()) node = &next;
                else fail("'" + key + "' is not a table");
            }
        }
        return node;
    }

    void parse_key_value(nlohmann::json& table) {
        auto parts = parse_dotted_key();
        skip_spaces();
        if (eof() || get() != '=') fail("expected '='");
        skip_spaces();
        nlohmann::json value = parse_value();
        nlohmann::json* node = &table;
        for (size_t i = 0; i + 1 < parts.size(); ++i) {
            if (!node->contains(parts[i])) (*node)[parts[i]] = nlohmann::json::object();
            node = &(*node)[parts[i]];
        }
        if (node->contains(parts.back())) fail("duplicate key '" + parts.back() + "'");
        (*node)[parts.back()] = std::move(value);
    }

    nlohmann::json parse_value() {
        if (eof()) fail("expected a value");
        char c = peek();
        if (c == '"' || c == '\'') return parse_string();
        if (c == '[') return parse_array();
        if (c == '{') return parse_inline_table();
        return parse_scalar();
    }

    nlohmann::json parse_string() {
        char quote = get();
        std::string out;
        while (true) {
            if (eof()) fail("unterminated string");
            char c = get();
            if (c == quote) break;
            if (c == '\n') fail("newline in string");
            if (quote == '"' && c == '\\') {
                if (eof()) fail("dangling escape");
                char e = get();
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail(std::string("unsupported escape '\\") + e + "'");
                }
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    nlohmann::json parse_array() {
        get(); // '['
        nlohmann::json arr = nlohmann::json::array();
        while (true) {
            skip_ws_and_comments();
            if (eof()) fail("unterminated array");
            if (peek() == ']') {
                get();
                break;
            }
            arr.push_back(parse_value());
            skip_ws_and_comments();
            if (!eof() && peek() == ',') {
                get();
                continue;
            }
            skip_ws_and_comments();
            if (eof() || peek() != ']') fail("expected ',' or ']'");
        }
        return arr;
    }

    nlohmann::json parse_inline_table() {
        get(); // '{'
        nlohmann::json obj = nlohmann::json::object();
        skip_spaces();
        if (!eof() && peek() == '}') {
            get();
            return obj;
        }
        while (true) {
            skip_spaces();
            std::string key = parse_bare_key();
            skip_spaces();
            if (eof() || get() != '=') fail("expected '=' in inline table");
            skip_spaces();
            obj[key] = parse_value();
            skip_spaces();
            if (eof()) fail("unterminated inline table");
            char c = get();
            if (c == '}') break;
            if (c != ',') fail("expected ',' or '}'");
        }
        return obj;
    }

    nlohmann::json parse_scalar() {
        std::string tok;
        while (!eof()) {
            char c = peek();
            if (c == ',' || c == ']' || c == '}' || c == '\n' || c == '#' || c == ' ' ||
                c == '\t' || c == '\r')
                break;
            tok.push_back(get());
        }
        if (tok == "true") return true;
        if (tok == "false") return false;
        if (tok.empty()) fail("expected a value");
        bool looks_float = tok.find_first_of(".eE") != std::string::npos &&
                           tok.find_first_not_of("+-0123456789.eE") == std::string::npos;
        try {
            size_t used = 0;
            if (!looks_float) {
                long long v = std::stoll(tok, &used);
                if (used == tok.size()) return v;
            }
            double d = std::stod(tok, &used);
            if (used == tok.size()) return d;
        } catch (const std::exception&) {
        }
        fail("cannot parse value '" + tok + "'");
    }
};

} // namespace

nlohmann::json parse_toml(const std::string& text) { return Parser(text).parse(); }

nlohmann::json parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_toml(buf.str());
}

nlohmann::json load_config(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") return parse_toml_file(path);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

} // namespace nilact
