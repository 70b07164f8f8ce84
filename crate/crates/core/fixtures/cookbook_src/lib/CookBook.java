package lib;

public class CookBook extends Book {
    private int recipes;
}
