// Writes the plate-with-hole meshes used by fixtures/scenarios/plate.json.
#include "wabc/generators.hpp"
#include "wabc/msh_io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(dir);

    wabc::PlateSpec plate;  // a = 0.08, r = 0.01, 100 rays x 130 radial steps
    wabc::PlateSpec ref = plate;
    ref.extra_steps = 210;

    for (const auto& [name, spec] : {std::pair{"plate_hole.msh", plate}, std::pair{"plate_hole_ref.msh", ref}}) {
        const auto mesh = wabc::generate_plate_octant(spec);
        std::ofstream out(dir / name, std::ios::binary);
        out << wabc::write_msh(mesh);
        std::cout << (dir / name).string() << ": " << mesh.num_nodes() << " nodes, " << mesh.num_elements()
                  << " elements\n";
    }
    return 0;
}
