// Writes a synthetic hourly demand/capacity-factor CSV for demos and tests.
#include <iostream>

#include <CLI11.hpp>

#include "elecsim/error.hpp"
#include "elecsim/synthetic.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Synthetic hourly series", "elecsim-synth"};
    int days = 730;
    std::uint64_t seed = 1;
    std::string out;
    app.add_option("--days", days)->check(CLI::PositiveNumber);
    app.add_option("--seed", seed);
    app.add_option("--out", out)->required();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }
    try {
        elecsim::write_hourly_series(elecsim::synthetic_hourly(days, seed), out);
    } catch (const elecsim::InputError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}
