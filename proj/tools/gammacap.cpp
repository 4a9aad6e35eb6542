#include "gammacap/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return gammacap::runCli(argc, argv, std::cout, std::cerr);
}
