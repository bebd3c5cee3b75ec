#include "qpperc/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qpperc/csv.hpp"

namespace qpperc {

namespace {

[[noreturn]] void fail_line(int line, const std::string& message) {
    throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool is_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!is_key_char(c)) return false;
    return true;
}

// Truncates at the first '#' outside a quoted string.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
        } else if (c == '"') {
            in_string = true;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

bool integer_shaped(const std::string& tok) {
    std::size_t i = (tok[0] == '+' || tok[0] == '-') ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i)
        if (std::isdigit(static_cast<unsigned char>(tok[i])) == 0) return false;
    return true;
}

struct ValueParser {
    const std::string& text;
    std::size_t pos = 0;
    int line = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool done() {
        skip_ws();
        return pos >= text.size();
    }

    std::string parse_string() {
        ++pos;  // opening quote
        std::string out;
        while (pos < text.size()) {
            char c = text[pos++];
            if (c == '"') return out;
            if (c == '\\') {
                if (pos >= text.size()) fail_line(line, "unterminated escape in string");
                char e = text[pos++];
                switch (e) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    default: fail_line(line, std::string("unsupported escape '\\") + e + "'");
                }
            } else {
                out += c;
            }
        }
        fail_line(line, "unterminated string");
    }

    ConfigValue parse() {
        skip_ws();
        if (pos >= text.size()) fail_line(line, "missing value");
        ConfigValue v;
        v.line = line;
        char c = text[pos];
        if (c == '"') {
            v.type = ConfigValue::Type::String;
            v.text = parse_string();
            return v;
        }
        if (c == '[') {
            ++pos;
            v.type = ConfigValue::Type::Array;
            skip_ws();
            if (pos < text.size() && text[pos] == ']') {
                ++pos;
                return v;
            }
            while (true) {
                v.array.push_back(parse());
                skip_ws();
                if (pos >= text.size()) fail_line(line, "unterminated array");
                if (text[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (text[pos] == ']') {
                    ++pos;
                    return v;
                }
                fail_line(line, "expected ',' or ']' in array");
            }
        }
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != ',' && text[pos] != ']' && text[pos] != ' ' &&
               text[pos] != '\t')
            ++pos;
        std::string tok = text.substr(start, pos - start);
        if (tok.empty()) fail_line(line, "missing value");
        if (tok == "true" || tok == "false") {
            v.type = ConfigValue::Type::Boolean;
            v.boolean = tok == "true";
            return v;
        }
        if (integer_shaped(tok)) {
            errno = 0;
            char* end = nullptr;
            long long n = std::strtoll(tok.c_str(), &end, 10);
            if (errno == ERANGE) fail_line(line, "integer out of range: " + tok);
            v.type = ConfigValue::Type::Integer;
            v.integer = n;
            v.number = static_cast<double>(n);
            return v;
        }
        errno = 0;
        char* end = nullptr;
        double x = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || tok.c_str() == end)
            fail_line(line, "cannot parse value '" + tok + "'");
        v.type = ConfigValue::Type::Float;
        v.number = x;
        return v;
    }
};

const char* type_name(ConfigValue::Type t) {
    switch (t) {
        case ConfigValue::Type::Integer: return "integer";
        case ConfigValue::Type::Float: return "float";
        case ConfigValue::Type::String: return "string";
        case ConfigValue::Type::Boolean: return "boolean";
        case ConfigValue::Type::Array: return "array";
    }
    return "?";
}

[[noreturn]] void fail_type(const std::string& key, const ConfigValue& v, const char* wanted) {
    throw ConfigError("key '" + key + "' (line " + std::to_string(v.line) + "): expected " +
                      wanted + ", got " + type_name(v.type));
}

}  // namespace

double ConfigValue::as_double(const std::string& key) const {
    if (type == Type::Integer) return static_cast<double>(integer);
    if (type == Type::Float) return number;
    fail_type(key, *this, "number");
}

std::int64_t ConfigValue::as_int(const std::string& key) const {
    if (type != Type::Integer) fail_type(key, *this, "integer");
    return integer;
}

bool ConfigValue::as_bool(const std::string& key) const {
    if (type != Type::Boolean) fail_type(key, *this, "boolean");
    return boolean;
}

const std::string& ConfigValue::as_string(const std::string& key) const {
    if (type != Type::String) fail_type(key, *this, "string");
    return text;
}

std::vector<double> ConfigValue::as_double_array(const std::string& key) const {
    if (type != Type::Array) fail_type(key, *this, "array of numbers");
    std::vector<double> out;
    out.reserve(array.size());
    for (const ConfigValue& e : array) out.push_back(e.as_double(key));
    return out;
}

std::vector<std::int64_t> ConfigValue::as_int_array(const std::string& key) const {
    if (type != Type::Array) fail_type(key, *this, "array of integers");
    std::vector<std::int64_t> out;
    out.reserve(array.size());
    for (const ConfigValue& e : array) out.push_back(e.as_int(key));
    return out;
}

std::vector<std::vector<double>> ConfigValue::as_double_matrix(const std::string& key) const {
    if (type != Type::Array) fail_type(key, *this, "array of arrays");
    std::vector<std::vector<double>> out;
    out.reserve(array.size());
    for (const ConfigValue& e : array) out.push_back(e.as_double_array(key));
    return out;
}

std::vector<std::vector<std::int64_t>> ConfigValue::as_int_matrix(const std::string& key) const {
    if (type != Type::Array) fail_type(key, *this, "array of arrays");
    std::vector<std::vector<std::int64_t>> out;
    out.reserve(array.size());
    for (const ConfigValue& e : array) out.push_back(e.as_int_array(key));
    return out;
}

ConfigTable parse_config_text(const std::string& text) {
    ConfigTable root;
    ConfigTable* current = &root;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string t = trim(strip_comment(raw));
        if (t.empty()) continue;
        if (t.front() == '[') {
            bool is_array = t.size() >= 2 && t[1] == '[';
            const std::string closer = is_array ? "]]" : "]";
            if (t.size() < 2 + closer.size() || t.substr(t.size() - closer.size()) != closer)
                fail_line(lineno, "malformed section header: " + t);
            std::string inside =
                trim(t.substr(is_array ? 2 : 1, t.size() - 2 * (is_array ? 2 : 1)));
            std::vector<std::string> parts;
            std::size_t p = 0;
            while (true) {
                std::size_t dot = inside.find('.', p);
                std::string part =
                    trim(dot == std::string::npos ? inside.substr(p) : inside.substr(p, dot - p));
                if (!valid_key(part)) fail_line(lineno, "bad section name: " + inside);
                parts.push_back(part);
                if (dot == std::string::npos) break;
                p = dot + 1;
            }
            ConfigTable* node = &root;
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
                ConfigTable& child = node->tables[parts[i]];
                if (child.line == 0) child.line = lineno;
                node = &child;
            }
            if (is_array) {
                auto& vec = node->table_arrays[parts.back()];
                vec.emplace_back();
                vec.back().line = lineno;
                current = &vec.back();
            } else {
                ConfigTable& child = node->tables[parts.back()];
                if (child.line == 0) child.line = lineno;
                current = &child;
            }
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) fail_line(lineno, "expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        if (!valid_key(key)) fail_line(lineno, "bad key name: '" + key + "'");
        std::string rhs = t.substr(eq + 1);
        ValueParser vp{rhs, 0, lineno};
        ConfigValue v = vp.parse();
        if (!vp.done()) fail_line(lineno, "trailing characters after value");
        if (current->values.count(key)) fail_line(lineno, "duplicate key '" + key + "'");
        current->values.emplace(key, std::move(v));
    }
    return root;
}

namespace {

/// Schema-side view of one section; unread keys are reported as unknown.
class TableReader {
  public:
    TableReader(const ConfigTable& table, std::string name)
        : table_(table), name_(std::move(name)) {}

    const ConfigValue* find(const std::string& key) {
        used_.insert(key);
        auto it = table_.values.find(key);
        return it == table_.values.end() ? nullptr : &it->second;
    }

    const ConfigValue& require(const std::string& key) {
        const ConfigValue* v = find(key);
        if (!v)
            throw ConfigError("[" + name_ + "] is missing required key '" + key + "'");
        return *v;
    }

    const std::vector<ConfigTable>* table_array(const std::string& key) {
        used_arrays_.insert(key);
        auto it = table_.table_arrays.find(key);
        return it == table_.table_arrays.end() ? nullptr : &it->second;
    }

    void finish() const {
        for (const auto& [k, v] : table_.values)
            if (!used_.count(k))
                throw ConfigError("unknown key '" + k + "' in [" + name_ + "] (line " +
                                  std::to_string(v.line) + ")");
        for (const auto& [k, t] : table_.tables)
            throw ConfigError("unknown section [" + name_ + "." + k + "] (line " +
                              std::to_string(t.line) + ")");
        for (const auto& [k, v] : table_.table_arrays)
            if (!used_arrays_.count(k))
                throw ConfigError("unknown section [[" + name_ + "." + k + "]] (line " +
                                  std::to_string(v.front().line) + ")");
    }

  private:
    const ConfigTable& table_;
    std::string name_;
    std::set<std::string> used_;
    std::set<std::string> used_arrays_;
};

ComponentConfig read_component(const ConfigTable& t, const std::string& name) {
    TableReader r(t, name);
    ComponentConfig c;
    c.M = r.require("M").as_double_matrix(name + ".M");
    c.theta = r.require("theta").as_double_array(name + ".theta");
    if (const ConfigValue* v = r.find("kind")) c.kind = v->as_string(name + ".kind");
    if (c.kind != "constant" && c.kind != "power-product")
        throw ConfigError("[" + name + "] kind must be \"constant\" or \"power-product\", got \"" +
                          c.kind + "\"");
    if (const ConfigValue* v = r.find("level")) c.level = v->as_double(name + ".level");
    if (const ConfigValue* v = r.find("zeros")) c.zeros = v->as_double_matrix(name + ".zeros");
    if (const ConfigValue* v = r.find("exponents"))
        c.exponents = v->as_double_array(name + ".exponents");
    if (c.kind == "power-product") {
        if (c.zeros.empty()) throw ConfigError("[" + name + "] power-product needs zeros");
        if (c.exponents.size() != c.zeros.size())
            throw ConfigError("[" + name + "] needs one exponent per zero");
    } else if (!c.zeros.empty() || !c.exponents.empty()) {
        throw ConfigError("[" + name + "] constant kind takes no zeros/exponents");
    }
    r.finish();
    return c;
}

EnvironmentConfig read_environment(const ConfigTable& t) {
    TableReader r(t, "environment");
    EnvironmentConfig e;
    if (const ConfigValue* v = r.find("d")) e.d = static_cast<int>(v->as_int("environment.d"));
    if (const ConfigValue* v = r.find("kappa")) e.kappa = v->as_double("environment.kappa");
    if (const ConfigValue* v = r.find("zeta")) e.zeta = v->as_double("environment.zeta");
    if (const ConfigValue* v = r.find("sigma")) e.sigma = v->as_double("environment.sigma");
    if (const ConfigValue* v = r.find("uniform")) e.uniform = v->as_bool("environment.uniform");
    if (const ConfigValue* v = r.find("delta")) e.delta = v->as_double("environment.delta");
    if (const ConfigValue* v = r.find("lambda")) e.lambda = v->as_double("environment.lambda");
    if (const std::vector<ConfigTable>* comps = r.table_array("component")) {
        if (e.uniform)
            throw ConfigError(
                "[environment] uniform = true conflicts with [[environment.component]]");
        int idx = 0;
        for (const ConfigTable& ct : *comps)
            e.components.push_back(
                read_component(ct, "environment.component#" + std::to_string(idx++)));
    } else if (!e.uniform) {
        throw ConfigError(
            "[environment] needs uniform = true or d+1 [[environment.component]] blocks");
    }
    r.finish();
    return e;
}

ScheduleConfig read_schedule(const ConfigTable& t) {
    TableReader r(t, "schedule");
    ScheduleConfig s;
    if (const ConfigValue* v = r.find("suggest")) s.suggest = v->as_bool("schedule.suggest");
    if (const ConfigValue* v = r.find("d")) s.d = static_cast<int>(v->as_int("schedule.d"));
    if (const ConfigValue* v = r.find("nu")) s.nu = static_cast<int>(v->as_int("schedule.nu"));
    if (const ConfigValue* v = r.find("zeta")) s.zeta = v->as_double("schedule.zeta");
    if (const ConfigValue* v = r.find("sigma")) s.sigma = v->as_double("schedule.sigma");
    if (const ConfigValue* v = r.find("R")) s.R = static_cast<int>(v->as_int("schedule.R"));
    const bool has_exponents = r.find("alpha") || r.find("gamma") || r.find("eta") ||
                               r.find("tau") || r.find("p") || r.find("q") || r.find("beta");
    if (!s.suggest) {
        s.alpha = r.require("alpha").as_double("schedule.alpha");
        s.gamma = r.require("gamma").as_double("schedule.gamma");
        s.eta = r.require("eta").as_double("schedule.eta");
        s.tau = r.require("tau").as_double("schedule.tau");
        s.p = r.require("p").as_double("schedule.p");
        s.q = r.require("q").as_double("schedule.q");
        s.beta = r.require("beta").as_double("schedule.beta");
    } else if (has_exponents) {
        throw ConfigError("[schedule] suggest = true conflicts with explicit exponents");
    }
    if (const ConfigValue* v = r.find("mu0")) s.mu0 = v->as_double("schedule.mu0");
    if (const ConfigValue* v = r.find("L0")) s.L0 = v->as_int("schedule.L0");
    if (const ConfigValue* v = r.find("C")) s.C = v->as_double("schedule.C");
    if (const ConfigValue* v = r.find("C_kappa")) s.C_kappa = v->as_double("schedule.C_kappa");
    if (const ConfigValue* v = r.find("k_max"))
        s.k_max = static_cast<int>(v->as_int("schedule.k_max"));
    r.finish();
    return s;
}

QueryConfig read_query(const ConfigTable& t, const std::string& name) {
    TableReader r(t, name);
    QueryConfig q;
    q.a = r.require("a").as_int_array(name + ".a");
    q.ta = r.require("ta").as_double(name + ".ta");
    q.b = r.require("b").as_int_array(name + ".b");
    q.tb = r.require("tb").as_double(name + ".tb");
    r.finish();
    return q;
}

RunConfig read_run(const ConfigTable& t) {
    TableReader r(t, "run");
    RunConfig c;
    if (const ConfigValue* v = r.find("center")) c.center = v->as_int_array("run.center");
    if (const ConfigValue* v = r.find("radius")) c.radius = v->as_int("run.radius");
    if (const ConfigValue* v = r.find("t_lo")) c.t_lo = v->as_double("run.t_lo");
    if (const ConfigValue* v = r.find("t_hi")) c.t_hi = v->as_double("run.t_hi");
    if (const ConfigValue* v = r.find("n_trials")) c.n_trials = v->as_int("run.n_trials");
    if (const ConfigValue* v = r.find("seed")) {
        std::int64_t s = v->as_int("run.seed");
        if (s < 0) throw ConfigError("run.seed must be >= 0");
        c.seed = static_cast<std::uint64_t>(s);
    }
    if (const ConfigValue* v = r.find("workers"))
        c.workers = static_cast<int>(v->as_int("run.workers"));
    if (const std::vector<ConfigTable>* qs = r.table_array("query")) {
        int idx = 0;
        for (const ConfigTable& qt : *qs)
            c.queries.push_back(read_query(qt, "run.query#" + std::to_string(idx++)));
    }
    r.finish();
    return c;
}

ScanConfig read_scan(const ConfigTable& t) {
    TableReader r(t, "scan");
    ScanConfig c;
    if (const ConfigValue* v = r.find("L")) c.L = v->as_int_array("scan.L");
    if (const ConfigValue* v = r.find("epsilon")) c.epsilon = v->as_double("scan.epsilon");
    if (const ConfigValue* v = r.find("epsilon_from_schedule"))
        c.epsilon_from_schedule = v->as_bool("scan.epsilon_from_schedule");
    if (const ConfigValue* v = r.find("centers")) c.centers = v->as_int_matrix("scan.centers");
    if (const ConfigValue* v = r.find("certificate_N"))
        c.certificate_N = v->as_int("scan.certificate_N");
    r.finish();
    return c;
}

FitConfig read_fit(const ConfigTable& t) {
    TableReader r(t, "fit");
    FitConfig c;
    if (const ConfigValue* v = r.find("spatial_distances"))
        c.spatial_distances = v->as_double_array("fit.spatial_distances");
    if (const ConfigValue* v = r.find("temporal_gaps"))
        c.temporal_gaps = v->as_double_array("fit.temporal_gaps");
    r.finish();
    return c;
}

OutputConfig read_output(const ConfigTable& t) {
    TableReader r(t, "output");
    OutputConfig c;
    if (const ConfigValue* v = r.find("directory")) c.directory = v->as_string("output.directory");
    if (const ConfigValue* v = r.find("formats")) {
        c.formats.clear();
        if (v->type != ConfigValue::Type::Array) fail_type("output.formats", *v, "array");
        for (const ConfigValue& e : v->array) {
            const std::string& f = e.as_string("output.formats");
            if (f != "csv" && f != "json")
                throw ConfigError("output.formats entries must be \"csv\" or \"json\", got \"" +
                                  f + "\"");
            c.formats.push_back(f);
        }
        if (c.formats.empty()) throw ConfigError("output.formats must not be empty");
    }
    r.finish();
    return c;
}

std::string fmt_double(double v) { return csv::format_decimal(v); }
std::string fmt_int(std::int64_t v) { return csv::format_int(v); }

std::string fmt_double_array(const std::vector<double>& a) {
    std::string out = "[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(a[i]);
    }
    return out + "]";
}

std::string fmt_int_array(const std::vector<std::int64_t>& a) {
    std::string out = "[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ", ";
        out += fmt_int(a[i]);
    }
    return out + "]";
}

std::string fmt_double_matrix(const std::vector<std::vector<double>>& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double_array(m[i]);
    }
    return out + "]";
}

std::string fmt_int_matrix(const std::vector<std::vector<std::int64_t>>& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ", ";
        out += fmt_int_array(m[i]);
    }
    return out + "]";
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

EnvironmentSpec EnvironmentConfig::build() const {
    if (uniform) return EnvironmentSpec::uniform(d, delta, lambda, kappa, zeta, sigma);
    std::vector<FieldComponent> comps;
    comps.reserve(components.size());
    for (const ComponentConfig& c : components) {
        Matrix M = Matrix::from_rows(c.M);
        TorusPoint theta(c.theta);
        SamplingFunction h = SamplingFunction::constant(1, 1.0);
        if (c.kind == "constant") {
            h = SamplingFunction::constant(M.rows, c.level);
        } else {
            std::vector<SamplingFunction::Zero> zeros;
            zeros.reserve(c.zeros.size());
            for (std::size_t j = 0; j < c.zeros.size(); ++j)
                zeros.push_back({TorusPoint(c.zeros[j]), c.exponents[j]});
            h = SamplingFunction::power_product(c.level, std::move(zeros));
        }
        comps.push_back({std::move(M), std::move(theta), std::move(h)});
    }
    return EnvironmentSpec(d, std::move(comps), kappa, zeta, sigma);
}

ScheduleParams ScheduleConfig::build() const {
    ScheduleParams params;
    if (suggest) {
        params = qpperc::suggest(d, nu, zeta, sigma, R);
    } else {
        params.d = d;
        params.nu = nu;
        params.zeta = zeta;
        params.sigma = sigma;
        params.R = R;
        params.alpha = alpha;
        params.gamma = gamma;
        params.eta = eta;
        params.tau = tau;
        params.p = p;
        params.q = q;
        params.beta = beta;
    }
    params.mu0 = mu0;
    params.L0 = L0;
    params.C = C;
    params.C_kappa = C_kappa;
    return params;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ConfigTable root = parse_config_text(text);
    ExperimentConfig out;
    for (const auto& [k, v] : root.values)
        throw ConfigError("top-level key '" + k + "' (line " + std::to_string(v.line) +
                          "); keys belong inside a section");
    for (const auto& [k, v] : root.table_arrays)
        throw ConfigError("unknown section [[" + k + "]] (line " +
                          std::to_string(v.front().line) + ")");
    bool saw_environment = false;
    for (const auto& [name, table] : root.tables) {
        if (name == "environment") {
            out.environment = read_environment(table);
            saw_environment = true;
        } else if (name == "schedule") {
            out.schedule = read_schedule(table);
        } else if (name == "run") {
            out.run = read_run(table);
        } else if (name == "scan") {
            out.scan = read_scan(table);
        } else if (name == "fit") {
            out.fit = read_fit(table);
        } else if (name == "output") {
            out.output = read_output(table);
        } else {
            throw ConfigError("unknown section [" + name + "] (line " +
                              std::to_string(table.line) + ")");
        }
    }
    if (!saw_environment) out.environment.uniform = true;
    return out;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string ExperimentConfig::render() const {
    std::ostringstream out;
    out << "[environment]\n";
    out << "d = " << environment.d << "\n";
    out << "kappa = " << fmt_double(environment.kappa) << "\n";
    out << "zeta = " << fmt_double(environment.zeta) << "\n";
    out << "sigma = " << fmt_double(environment.sigma) << "\n";
    out << "uniform = " << (environment.uniform ? "true" : "false") << "\n";
    out << "delta = " << fmt_double(environment.delta) << "\n";
    out << "lambda = " << fmt_double(environment.lambda) << "\n";
    for (const ComponentConfig& c : environment.components) {
        out << "\n[[environment.component]]\n";
        out << "M = " << fmt_double_matrix(c.M) << "\n";
        out << "theta = " << fmt_double_array(c.theta) << "\n";
        out << "kind = " << quote(c.kind) << "\n";
        out << "level = " << fmt_double(c.level) << "\n";
        if (!c.zeros.empty()) {
            out << "zeros = " << fmt_double_matrix(c.zeros) << "\n";
            out << "exponents = " << fmt_double_array(c.exponents) << "\n";
        }
    }
    out << "\n[schedule]\n";
    out << "suggest = " << (schedule.suggest ? "true" : "false") << "\n";
    out << "d = " << schedule.d << "\n";
    out << "nu = " << schedule.nu << "\n";
    out << "zeta = " << fmt_double(schedule.zeta) << "\n";
    out << "sigma = " << fmt_double(schedule.sigma) << "\n";
    out << "R = " << schedule.R << "\n";
    if (!schedule.suggest) {
        out << "alpha = " << fmt_double(schedule.alpha) << "\n";
        out << "gamma = " << fmt_double(schedule.gamma) << "\n";
        out << "eta = " << fmt_double(schedule.eta) << "\n";
        out << "tau = " << fmt_double(schedule.tau) << "\n";
        out << "p = " << fmt_double(schedule.p) << "\n";
        out << "q = " << fmt_double(schedule.q) << "\n";
        out << "beta = " << fmt_double(schedule.beta) << "\n";
    }
    out << "mu0 = " << fmt_double(schedule.mu0) << "\n";
    out << "L0 = " << fmt_int(schedule.L0) << "\n";
    out << "C = " << fmt_double(schedule.C) << "\n";
    out << "C_kappa = " << fmt_double(schedule.C_kappa) << "\n";
    out << "k_max = " << schedule.k_max << "\n";
    out << "\n[run]\n";
    out << "center = " << fmt_int_array(run.center) << "\n";
    out << "radius = " << fmt_int(run.radius) << "\n";
    out << "t_lo = " << fmt_double(run.t_lo) << "\n";
    out << "t_hi = " << fmt_double(run.t_hi) << "\n";
    out << "n_trials = " << fmt_int(run.n_trials) << "\n";
    out << "seed = " << fmt_int(static_cast<std::int64_t>(run.seed)) << "\n";
    out << "workers = " << run.workers << "\n";
    for (const QueryConfig& q : run.queries) {
        out << "\n[[run.query]]\n";
        out << "a = " << fmt_int_array(q.a) << "\n";
        out << "ta = " << fmt_double(q.ta) << "\n";
        out << "b = " << fmt_int_array(q.b) << "\n";
        out << "tb = " << fmt_double(q.tb) << "\n";
    }
    out << "\n[scan]\n";
    out << "L = " << fmt_int_array(scan.L) << "\n";
    out << "epsilon = " << fmt_double(scan.epsilon) << "\n";
    out << "epsilon_from_schedule = " << (scan.epsilon_from_schedule ? "true" : "false") << "\n";
    out << "centers = " << fmt_int_matrix(scan.centers) << "\n";
    out << "certificate_N = " << fmt_int(scan.certificate_N) << "\n";
    out << "\n[fit]\n";
    out << "spatial_distances = " << fmt_double_array(fit.spatial_distances) << "\n";
    out << "temporal_gaps = " << fmt_double_array(fit.temporal_gaps) << "\n";
    out << "\n[output]\n";
    out << "directory = " << quote(output.directory) << "\n";
    out << "formats = [";
    for (std::size_t i = 0; i < output.formats.size(); ++i) {
        if (i) out << ", ";
        out << quote(output.formats[i]);
    }
    out << "]\n";
    return out.str();
}

}  // namespace qpperc
