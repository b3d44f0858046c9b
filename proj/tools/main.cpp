#include <exception>
#include <iostream>

#include "config.hpp"

#include "sppde/errors.hpp"

int main(int argc, char** argv)
{
    using namespace sppde;
    try {
        const cli::RunConfig cfg = cli::parse_config(argc, argv);
        return cli::run(cfg);
    } catch (const cli::HelpRequested& h) {
        std::cout << h.text;
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "sppde: error: config: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "sppde: error: config: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "sppde: error: io: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "sppde: error: numerical: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "sppde: error: internal: " << e.what() << "\n";
        return 1;
    }
}
