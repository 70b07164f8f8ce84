package lib;

public class Author {
    private String name;
    private Book[] books;
}
