#include <iostream>
#include <string>
#include <vector>

#include <latticeflow/cli.hpp>

int main(int argc, char** argv)
{
    return latticeflow::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
