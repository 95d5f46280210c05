from hermclust.main import main

main()
