#include "kcover/instance.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <sstream>

namespace kcover {

void Instance::rebuild_bits() {
    base_bits.assign(base_sets.size(), Bitset(n));
    for (size_t i = 0; i < base_sets.size(); ++i)
        for (int e : base_sets[i]) base_bits[i].set(e);
}

Bitset Instance::full_universe() const {
    Bitset b(n);
    for (int i = 0; i < n; ++i) b.set(i);
    return b;
}

void Instance::validate() const {
    if (n < 0 || k < 0) throw DomainError("negative universe or k");
    std::vector<char> seen(size_t(n), 0);
    std::map<std::vector<int>, int> dedup;
    for (size_t s = 0; s < base_sets.size(); ++s) {
        const auto& bs = base_sets[s];
        int line = s < base_lines.size() ? base_lines[s] : 0;
        if (bs.empty()) throw DomainError("empty set", line);
        if (int(bs.size()) > k) throw DomainError("set larger than k", line);
        for (size_t i = 0; i < bs.size(); ++i) {
            if (bs[i] < 0 || bs[i] >= n)
                throw DomainError("element " + std::to_string(bs[i] + 1) + " out of range", line);
            if (i && bs[i] <= bs[i - 1])
                throw DomainError("elements not strictly increasing", line);
            seen[size_t(bs[i])] = 1;
        }
        auto [it, fresh] = dedup.emplace(bs, line);
        if (!fresh) throw DomainError("duplicate set (first at line " + std::to_string(it->second) + ")", line);
    }
    for (int e = 0; e < n; ++e)
        if (!seen[size_t(e)])
            throw DomainError("element " + std::to_string(e + 1) + " not covered by any set");
}

Bitset ChosenSet::bits(int universe) const {
    Bitset b(universe);
    for (int e : elements) b.set(e);
    return b;
}

bool chosen_less(const ChosenSet& a, const ChosenSet& b) {
    if (a.elements != b.elements) return a.elements < b.elements;
    return a.base_index < b.base_index;
}

Bitset Packing::covered(int universe) const {
    Bitset b(universe);
    for (const auto& m : members)
        for (int e : m.elements) b.set(e);
    return b;
}

namespace {

std::vector<long long> parse_ints(const std::string& s, size_t from, int line) {
    std::vector<long long> out;
    size_t i = from;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        if (i >= s.size()) break;
        long long v = 0;
        auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
        if (ec != std::errc() || (p != s.data() + s.size() && *p != ' ' && *p != '\t'))
            throw DomainError("expected integer", line);
        out.push_back(v);
        i = size_t(p - s.data());
    }
    return out;
}

}  // namespace

Instance parse_instance(std::istream& in) {
    Instance inst;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    long long m_declared = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!have_header) inst.comments.push_back(line);
            continue;
        }
        if (!have_header) {
            std::istringstream h(line);
            std::string p, kind;
            h >> p >> kind;
            if (p != "p" || kind != "setcover")
                throw DomainError("malformed header, expected 'p setcover <n> <m> <k>'", line_no);
            long long n = -1, k = -1;
            if (!(h >> n >> m_declared >> k) || n < 0 || m_declared < 0 || k < 0)
                throw DomainError("malformed header counts", line_no);
            std::string extra;
            if (h >> extra) throw DomainError("trailing tokens in header", line_no);
            inst.n = int(n);
            inst.k = int(k);
            have_header = true;
            continue;
        }
        if (line[0] != 's' || (line.size() > 1 && line[1] != ' ' && line[1] != '\t'))
            throw DomainError("expected 's <e1> ...' line", line_no);
        auto ids = parse_ints(line, 1, line_no);
        if (ids.empty()) throw DomainError("empty set", line_no);
        if (int(ids.size()) > inst.k) throw DomainError("set larger than k", line_no);
        std::vector<int> set;
        set.reserve(ids.size());
        for (size_t i = 0; i < ids.size(); ++i) {
            long long e = ids[i];
            if (e < 1 || e > inst.n)
                throw DomainError("element " + std::to_string(e) + " out of range", line_no);
            if (i && e <= ids[i - 1])
                throw DomainError("elements not strictly increasing", line_no);
            set.push_back(int(e - 1));
        }
        inst.base_sets.push_back(std::move(set));
        inst.base_lines.push_back(line_no);
    }
    if (!have_header) throw DomainError("missing 'p setcover' header");
    if (static_cast<long long>(inst.base_sets.size()) != m_declared)
        throw DomainError("header declares " + std::to_string(m_declared) + " sets, file has " +
                          std::to_string(inst.base_sets.size()));
    inst.validate();
    inst.rebuild_bits();
    return inst;
}

Instance parse_instance_text(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    for (const auto& c : inst.comments) out << c << '\n';
    out << "p setcover " << inst.n << ' ' << inst.base_sets.size() << ' ' << inst.k << '\n';
    for (const auto& bs : inst.base_sets) {
        out << 's';
        for (int e : bs) out << ' ' << (e + 1);
        out << '\n';
    }
    return out.str();
}

std::string serialize_cover(const Instance& inst, const Cover& c) {
    std::vector<ChosenSet> sorted = c.members;
    std::sort(sorted.begin(), sorted.end(), chosen_less);
    std::ostringstream out;
    int ones = 0;
    for (const auto& m : sorted) {
        int line = (m.base_index >= 0 && size_t(m.base_index) < inst.base_lines.size())
                       ? inst.base_lines[size_t(m.base_index)]
                       : 0;
        out << "c " << line;
        for (int e : m.elements) out << ' ' << (e + 1);
        out << '\n';
        if (m.elements.size() == 1) ++ones;
    }
    out << "stats " << sorted.size() << ' ' << ones << '\n';
    return out.str();
}

Cover parse_cover(const Instance& inst, std::istream& in) {
    Cover c;
    std::string line;
    int line_no = 0;
    std::optional<std::pair<long long, long long>> stats;
    std::map<int, int> line_to_base;
    for (size_t i = 0; i < inst.base_lines.size(); ++i) line_to_base[inst.base_lines[i]] = int(i);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("stats", 0) == 0) {
            auto v = parse_ints(line, 5, line_no);
            if (v.size() != 2) throw DomainError("malformed stats line", line_no);
            stats = {v[0], v[1]};
            continue;
        }
        if (line[0] != 'c') throw DomainError("expected 'c <base_line> <e1> ...'", line_no);
        auto v = parse_ints(line, 1, line_no);
        if (v.size() < 2) throw DomainError("chosen set needs a base line and elements", line_no);
        auto it = line_to_base.find(int(v[0]));
        if (it == line_to_base.end())
            throw DomainError("no base set at instance line " + std::to_string(v[0]), line_no);
        ChosenSet cs;
        cs.base_index = it->second;
        for (size_t i = 1; i < v.size(); ++i) {
            if (v[i] < 1 || v[i] > inst.n) throw DomainError("element out of range", line_no);
            cs.elements.push_back(int(v[i] - 1));
        }
        if (!std::is_sorted(cs.elements.begin(), cs.elements.end()))
            throw DomainError("elements not sorted", line_no);
        c.members.push_back(std::move(cs));
    }
    if (stats) {
        int ones = 0;
        for (const auto& m : c.members) ones += m.elements.size() == 1;
        if (stats->first != (long long)c.members.size() || stats->second != ones)
            throw DomainError("stats line disagrees with cover content");
    }
    return c;
}

namespace {

void check_members(const Instance& inst, const std::vector<ChosenSet>& members, Bitset& covered) {
    for (const auto& m : members) {
        if (m.elements.empty()) throw DomainError("empty chosen set");
        if (m.base_index < 0 || size_t(m.base_index) >= inst.base_sets.size())
            throw DomainError("chosen set references unknown base set");
        const auto& base = inst.base_sets[size_t(m.base_index)];
        for (int e : m.elements) {
            if (!std::binary_search(base.begin(), base.end(), e))
                throw DomainError("element " + std::to_string(e + 1) +
                                  " not in base set at line " +
                                  std::to_string(inst.base_lines[size_t(m.base_index)]));
            if (covered.test(e))
                throw DomainError("overlap on element " + std::to_string(e + 1));
            covered.set(e);
        }
    }
}

}  // namespace

CoverStats validate_cover(const Instance& inst, const Cover& c) {
    Bitset covered(inst.n);
    check_members(inst, c.members, covered);
    for (int e = 0; e < inst.n; ++e)
        if (!covered.test(e)) throw DomainError("gap: element " + std::to_string(e + 1) + " uncovered");
    CoverStats st;
    st.total = int(c.members.size());
    st.by_size.assign(size_t(inst.k) + 1, 0);
    for (const auto& m : c.members) {
        size_t sz = m.elements.size();
        if (sz >= st.by_size.size()) st.by_size.resize(sz + 1, 0);
        ++st.by_size[sz];
    }
    st.ones = st.by_size.size() > 1 ? st.by_size[1] : 0;
    return st;
}

void validate_packing(const Instance& inst, const Packing& p) {
    Bitset covered(inst.n);
    check_members(inst, p.members, covered);
    for (const auto& m : p.members)
        if (int(m.elements.size()) != p.size_class)
            throw DomainError("packing member has wrong size");
}

Instance induced_subinstance(const Instance& inst, const Bitset& uncovered, int max_size) {
    Instance sub;
    std::vector<int> old_to_new(size_t(inst.n), -1);
    uncovered.for_each([&](int e) {
        old_to_new[size_t(e)] = sub.n++;
    });
    sub.k = max_size;
    std::map<std::vector<int>, int> dedup;
    auto emit = [&](std::vector<int> set, int line) {
        if (dedup.emplace(set, 0).second) {
            sub.base_sets.push_back(std::move(set));
            sub.base_lines.push_back(line);
        }
    };
    for (size_t s = 0; s < inst.base_sets.size(); ++s) {
        std::vector<int> inter;
        for (int e : inst.base_sets[s])
            if (uncovered.test(e)) inter.push_back(old_to_new[size_t(e)]);
        if (inter.empty()) continue;
        int line = inst.base_lines.empty() ? 0 : inst.base_lines[s];
        if (int(inter.size()) <= max_size) {
            emit(inter, line);
            continue;
        }
        // Enumerate the max_size-subsets; smaller subsets stay implicit.
        std::vector<int> pick(static_cast<size_t>(max_size));
        std::vector<int> idx(static_cast<size_t>(max_size));
        for (int i = 0; i < max_size; ++i) idx[size_t(i)] = i;
        for (;;) {
            for (int i = 0; i < max_size; ++i) pick[size_t(i)] = inter[size_t(idx[size_t(i)])];
            emit(pick, line);
            int i = max_size - 1;
            while (i >= 0 && idx[size_t(i)] == int(inter.size()) - max_size + i) --i;
            if (i < 0) break;
            ++idx[size_t(i)];
            for (int j = i + 1; j < max_size; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
        }
    }
    sub.rebuild_bits();
    return sub;
}

}  // namespace kcover
