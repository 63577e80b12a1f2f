#include "wabc/msh_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace wabc {

namespace {

constexpr int kVolumePhysical = 100;

std::string next_token_line(std::istringstream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) return line;
    }
    return {};
}

void expect_line(std::istringstream& in, const std::string& header) {
    const std::string line = next_token_line(in);
    if (line.rfind(header, 0) != 0) throw MeshError("malformed section header: expected " + header + ", got '" + line + "'");
}

std::size_t read_count(std::istringstream& in, const char* section) {
    std::istringstream ls(next_token_line(in));
    long long n = -1;
    if (!(ls >> n) || n < 0) throw MeshError(std::string("malformed count in ") + section);
    return static_cast<std::size_t>(n);
}

struct RawElement {
    int type = 0;
    int physical = 0;
    std::vector<long long> nodes;
};

}  // namespace

PhysicalTagMap default_physical_tags() {
    return {{1, BoundaryTag::Excitation}, {2, BoundaryTag::Absorbing}, {3, BoundaryTag::Neumann}};
}

Mesh parse_msh(std::string_view text, const PhysicalTagMap& tags) {
    std::istringstream in{std::string(text)};

    std::vector<Vec3> nodes;
    std::unordered_map<long long, std::int32_t> node_index;
    std::vector<RawElement> raw;
    bool have_nodes = false;
    bool have_elements = false;
    bool have_format = false;

    for (std::string line = next_token_line(in); !line.empty(); line = next_token_line(in)) {
        if (line.rfind("$MeshFormat", 0) == 0) {
            std::istringstream ls(next_token_line(in));
            double version = 0.0;
            int file_type = -1;
            if (!(ls >> version >> file_type)) throw MeshError("malformed $MeshFormat");
            if (version < 2.0 || version >= 3.0 || file_type != 0)
                throw MeshError("only MSH 2.x ASCII is supported");
            expect_line(in, "$EndMeshFormat");
            have_format = true;
        } else if (line.rfind("$PhysicalNames", 0) == 0) {
            const std::size_t n = read_count(in, "$PhysicalNames");
            for (std::size_t i = 0; i < n; ++i) next_token_line(in);
            expect_line(in, "$EndPhysicalNames");
        } else if (line.rfind("$Nodes", 0) == 0) {
            const std::size_t n = read_count(in, "$Nodes");
            nodes.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                std::istringstream ls(next_token_line(in));
                long long id = 0;
                Vec3 x{};
                if (!(ls >> id >> x[0] >> x[1] >> x[2])) throw MeshError("malformed node line in $Nodes");
                if (!node_index.emplace(id, static_cast<std::int32_t>(nodes.size())).second)
                    throw MeshError("duplicate node id " + std::to_string(id));
                nodes.push_back(x);
            }
            expect_line(in, "$EndNodes");
            have_nodes = true;
        } else if (line.rfind("$Elements", 0) == 0) {
            const std::size_t n = read_count(in, "$Elements");
            raw.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                std::istringstream ls(next_token_line(in));
                long long id = 0;
                int type = 0;
                int ntags = 0;
                if (!(ls >> id >> type >> ntags) || ntags < 0) throw MeshError("malformed element line in $Elements");
                RawElement el;
                el.type = type;
                for (int t = 0; t < ntags; ++t) {
                    int v = 0;
                    if (!(ls >> v)) throw MeshError("malformed element tags");
                    if (t == 0) el.physical = v;
                }
                int nn = 0;
                switch (type) {
                    case 1: nn = 2; break;
                    case 2: nn = 3; break;
                    case 4: nn = 4; break;
                    case 15: nn = 1; break;
                    default: throw MeshError("unknown element type " + std::to_string(type));
                }
                el.nodes.resize(static_cast<std::size_t>(nn));
                for (auto& v : el.nodes)
                    if (!(ls >> v)) throw MeshError("malformed element node list");
                if (type != 15) raw.push_back(std::move(el));
            }
            expect_line(in, "$EndElements");
            have_elements = true;
        } else if (line[0] == '$' && line.rfind("$End", 0) != 0) {
            // Unknown section: skip to its end marker.
            const std::string end = "$End" + line.substr(1);
            std::string l;
            do {
                l = next_token_line(in);
                if (l.empty()) throw MeshError("unterminated section " + line);
            } while (l.rfind(end, 0) != 0);
        } else {
            throw MeshError("malformed section header '" + line + "'");
        }
    }
    if (!have_format) throw MeshError("malformed section header: missing $MeshFormat");
    if (!have_nodes) throw MeshError("malformed section header: missing $Nodes");
    if (!have_elements) throw MeshError("malformed section header: missing $Elements");

    int dim = 2;
    for (const auto& el : raw)
        if (el.type == 4) dim = 3;

    const int volume_type = dim == 2 ? 2 : 4;
    const int facet_type = dim == 2 ? 1 : 2;

    auto map_node = [&](long long id) -> std::int32_t {
        const auto it = node_index.find(id);
        if (it == node_index.end()) throw MeshError("dangling reference: node id " + std::to_string(id));
        return it->second;
    };

    std::vector<Mesh::Element> elements;
    std::vector<BoundaryFacet> facets;
    for (const auto& el : raw) {
        if (el.type == volume_type) {
            Mesh::Element e{-1, -1, -1, -1};
            for (std::size_t k = 0; k < el.nodes.size(); ++k) e[k] = map_node(el.nodes[k]);
            elements.push_back(e);
        } else if (el.type == facet_type) {
            const auto it = tags.find(el.physical);
            if (it == tags.end())
                throw MeshError("boundary physical group " + std::to_string(el.physical) + " has no tag mapping");
            BoundaryFacet f;
            for (std::size_t k = 0; k < el.nodes.size(); ++k) f.nodes[k] = map_node(el.nodes[k]);
            f.tag = it->second;
            facets.push_back(f);
        }
    }
    return Mesh(dim, std::move(nodes), std::move(elements), std::move(facets));
}

Mesh read_msh_file(const std::string& path, const PhysicalTagMap& tags) {
    std::ifstream file(path);
    if (!file) throw MeshError("cannot open mesh file: " + path);
    std::ostringstream ss;
    ss << file.rdbuf();
    return parse_msh(ss.str(), tags);
}

std::string write_msh(const Mesh& mesh, const std::map<BoundaryTag, int>& physical_of) {
    std::map<BoundaryTag, int> phys{{BoundaryTag::Excitation, 1}, {BoundaryTag::Absorbing, 2}, {BoundaryTag::Neumann, 3}};
    for (const auto& [tag, id] : physical_of) phys[tag] = id;

    std::ostringstream out;
    out.precision(17);
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    out << "$Nodes\n" << mesh.num_nodes() << "\n";
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        const auto& x = mesh.node(i);
        out << i + 1 << ' ' << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
    }
    out << "$EndNodes\n";
    out << "$Elements\n" << mesh.num_facets() + mesh.num_elements() << "\n";
    std::size_t id = 1;
    const int facet_type = mesh.dim() == 2 ? 1 : 2;
    const int volume_type = mesh.dim() == 2 ? 2 : 4;
    for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
        const int p = phys.at(mesh.facet_tag(f));
        out << id++ << ' ' << facet_type << " 2 " << p << ' ' << p;
        for (auto n : mesh.facet_nodes(f)) out << ' ' << n + 1;
        out << '\n';
    }
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        out << id++ << ' ' << volume_type << " 2 " << kVolumePhysical << ' ' << kVolumePhysical;
        for (auto n : mesh.element(e)) out << ' ' << n + 1;
        out << '\n';
    }
    out << "$EndElements\n";
    return out.str();
}

}  // namespace wabc
